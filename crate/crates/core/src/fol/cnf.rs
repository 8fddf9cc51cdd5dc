//! Clause normal form conversion.
//!
//! The pipeline is the standard one: negation normal form, Skolemization
//! of existentials, dropping universal quantifiers, and distributing
//! disjunction over conjunction. Existentials are replaced by fresh
//! constants `sk1`, `sk2`, ... in left-to-right order; an existential in
//! the scope of a universal would need a Skolem function, which the term
//! language does not have, and is rejected.
//!
//! Clauses are rendered rule-style: negative literals form the body,
//! positive literals the head, `body -> head`. A clause with an empty
//! head prints `-> false`; a fact prints as the bare head.

use std::collections::BTreeMap;
use std::fmt;

use super::{Atom, FolError, Formula, Term};

/// A clause `body -> head`: the implication form of a disjunction whose
/// negative literals are `body` and positive literals `head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
}

impl Clause {
    pub fn is_unit(&self) -> bool {
        self.body.len() + self.head.len() == 1
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = |a: &Atom| {
            let args: Vec<&str> = a.args.iter().map(|t| t.name()).collect();
            format!("{}({})", a.predicate, args.join(","))
        };
        let heads: Vec<String> = self.head.iter().map(atom).collect();
        if self.body.is_empty() {
            if heads.is_empty() {
                return f.write_str("false");
            }
            return f.write_str(&heads.join(" | "));
        }
        let bodies: Vec<String> = self.body.iter().map(atom).collect();
        write!(f, "{} -> ", bodies.join(", "))?;
        if heads.is_empty() {
            f.write_str("false")
        } else {
            f.write_str(&heads.join(" | "))
        }
    }
}

/// Literal in negation normal form.
#[derive(Debug, Clone)]
enum Nnf {
    Lit { atom: Atom, negated: bool },
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Exists(Vec<String>, Box<Nnf>),
    Forall(Vec<String>, Box<Nnf>),
}

fn to_nnf(f: &Formula, negated: bool) -> Nnf {
    match f {
        Formula::Atom(a) => Nnf::Lit {
            atom: a.clone(),
            negated,
        },
        Formula::Not(b) => to_nnf(b, !negated),
        Formula::And(fs) => {
            let items = fs.iter().map(|f| to_nnf(f, negated)).collect();
            if negated {
                Nnf::Or(items)
            } else {
                Nnf::And(items)
            }
        }
        Formula::Or(fs) => {
            let items = fs.iter().map(|f| to_nnf(f, negated)).collect();
            if negated {
                Nnf::And(items)
            } else {
                Nnf::Or(items)
            }
        }
        Formula::Implies(a, c) => {
            // a => c is ~a | c.
            let items = vec![to_nnf(a, !negated), to_nnf(c, negated)];
            if negated {
                Nnf::And(items)
            } else {
                Nnf::Or(items)
            }
        }
        Formula::Exists(vs, b) => {
            let body = Box::new(to_nnf(b, negated));
            if negated {
                Nnf::Forall(vs.clone(), body)
            } else {
                Nnf::Exists(vs.clone(), body)
            }
        }
        Formula::Forall(vs, b) => {
            let body = Box::new(to_nnf(b, negated));
            if negated {
                Nnf::Exists(vs.clone(), body)
            } else {
                Nnf::Forall(vs.clone(), body)
            }
        }
    }
}

struct Skolemizer {
    counter: usize,
    /// Current substitution from existential variables to Skolem constants.
    substitution: BTreeMap<String, String>,
    /// Universal variables currently in scope.
    universals: Vec<String>,
}

impl Skolemizer {
    fn skolemize(&mut self, f: Nnf) -> Result<Nnf, FolError> {
        match f {
            Nnf::Lit { atom, negated } => {
                let args = atom
                    .args
                    .into_iter()
                    .map(|t| match t {
                        Term::Variable(v) => match self.substitution.get(&v) {
                            Some(c) => Term::Constant(c.clone()),
                            None => Term::Variable(v),
                        },
                        c => c,
                    })
                    .collect();
                Ok(Nnf::Lit {
                    atom: Atom {
                        predicate: atom.predicate,
                        args,
                    },
                    negated,
                })
            }
            Nnf::And(items) => Ok(Nnf::And(
                items
                    .into_iter()
                    .map(|i| self.skolemize(i))
                    .collect::<Result<_, _>>()?,
            )),
            Nnf::Or(items) => Ok(Nnf::Or(
                items
                    .into_iter()
                    .map(|i| self.skolemize(i))
                    .collect::<Result<_, _>>()?,
            )),
            Nnf::Exists(vars, body) => {
                if !self.universals.is_empty() {
                    return Err(FolError::UnsupportedConstruct(format!(
                        "existential quantifier over {} inside the scope of a universal \
                         quantifier requires Skolem functions",
                        vars.join(",")
                    )));
                }
                let shadowed: Vec<(String, Option<String>)> = vars
                    .iter()
                    .map(|v| (v.clone(), self.substitution.get(v).cloned()))
                    .collect();
                for v in &vars {
                    self.counter += 1;
                    self.substitution
                        .insert(v.clone(), format!("sk{}", self.counter));
                }
                let body = self.skolemize(*body)?;
                for (v, old) in shadowed {
                    match old {
                        Some(c) => self.substitution.insert(v, c),
                        None => self.substitution.remove(&v),
                    };
                }
                Ok(body)
            }
            Nnf::Forall(vars, body) => {
                let depth = self.universals.len();
                self.universals.extend(vars.iter().cloned());
                // A universally quantified variable shadows any outer
                // Skolem substitution of the same name.
                let shadowed: Vec<(String, Option<String>)> = vars
                    .iter()
                    .map(|v| (v.clone(), self.substitution.remove(v)))
                    .collect();
                let body = self.skolemize(*body)?;
                self.universals.truncate(depth);
                for (v, old) in shadowed {
                    if let Some(c) = old {
                        self.substitution.insert(v, c);
                    }
                }
                Ok(Nnf::Forall(vars, Box::new(body)))
            }
        }
    }
}

fn drop_universals(f: Nnf) -> Nnf {
    match f {
        Nnf::Forall(_, body) => drop_universals(*body),
        Nnf::And(items) => Nnf::And(items.into_iter().map(drop_universals).collect()),
        Nnf::Or(items) => Nnf::Or(items.into_iter().map(drop_universals).collect()),
        Nnf::Exists(vs, body) => Nnf::Exists(vs, Box::new(drop_universals(*body))),
        lit => lit,
    }
}

/// Distributes Or over And, producing clauses as literal lists.
fn distribute(f: &Nnf) -> Vec<Vec<(Atom, bool)>> {
    match f {
        Nnf::Lit { atom, negated } => vec![vec![(atom.clone(), *negated)]],
        Nnf::And(items) => items.iter().flat_map(distribute).collect(),
        Nnf::Or(items) => {
            let mut acc: Vec<Vec<(Atom, bool)>> = vec![Vec::new()];
            for item in items {
                let clauses = distribute(item);
                let mut next = Vec::with_capacity(acc.len() * clauses.len());
                for left in &acc {
                    for right in &clauses {
                        let mut merged = left.clone();
                        merged.extend(right.iter().cloned());
                        next.push(merged);
                    }
                }
                acc = next;
            }
            acc
        }
        // Existentials are gone after Skolemization, universals after
        // drop_universals.
        Nnf::Exists(_, _) | Nnf::Forall(_, _) => unreachable!("quantifier survived preprocessing"),
    }
}

/// Converts a formula to clause normal form. Outermost existentials
/// become Skolem constants `sk1`, `sk2`, ...; free variables (open rule
/// templates) and universally quantified variables remain variables,
/// implicitly universal in the clauses.
pub fn clausify(f: &Formula) -> Result<Vec<Clause>, FolError> {
    let nnf = to_nnf(f, false);
    let mut sk = Skolemizer {
        counter: 0,
        substitution: BTreeMap::new(),
        universals: Vec::new(),
    };
    let skolemized = sk.skolemize(nnf)?;
    let matrix = drop_universals(skolemized);
    let clauses = distribute(&matrix)
        .into_iter()
        .map(|lits| {
            let mut body = Vec::new();
            let mut head = Vec::new();
            for (atom, negated) in lits {
                if negated {
                    body.push(atom);
                } else {
                    head.push(atom);
                }
            }
            Clause { body, head }
        })
        .collect();
    Ok(clauses)
}
