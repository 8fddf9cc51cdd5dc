//! First-order logic formulas in a KnEWS-style concrete syntax.
//!
//! The formula language covers what semantic-parsing front ends such as
//! KnEWS emit for English sentences: existentially quantified conjunctions
//! of atoms, with negation wrapping subformulas. On top of the AST this
//! module provides the rewrites the negation pipeline needs: double
//! negation removal, enumeration of negation sites with their scopes,
//! scope narrowing onto a single atom, and replacement of a negated atom
//! by an inverse predicate.

mod cnf;
mod parse;
mod print;

pub use cnf::{clausify, Clause};
pub use parse::{parse_formula, parse_open_formula};
pub use print::print_formula;

use std::collections::BTreeSet;

use thiserror::Error;

/// A term is either a variable (uppercase-initial) or a constant
/// (lowercase-initial). Function symbols of arity > 0 are not supported.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Variable(n) | Term::Constant(n) => n,
        }
    }
}

/// An atomic formula: a predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }
}

/// First-order formula.
///
/// `And`/`Or` hold flat lists with at least two members after parsing
/// normalization; a parenthesized single formula collapses to its content.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// Path from the root to a node, as child indices.
///
/// `Not`, `Exists` and `Forall` have a single child `0`; `And`/`Or`
/// children are indexed by position; `Implies` has antecedent `0` and
/// consequent `1`.
pub type NodePath = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FolError {
    #[error("syntax error at line {line}, column {column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("unbound variable {name} at line {line}, column {column} (use open-clause mode for rule templates)")]
    UnboundVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("no atom with lemma {lemma} in the negation scope")]
    NoMatchingAtom { lemma: String },
    #[error("negation scope at the given path is not a single atom")]
    ScopeNotAtomic,
    #[error("path does not resolve to a negation node")]
    NotANegation,
    #[error("unsupported construct for clausification: {0}")]
    UnsupportedConstruct(String),
}

/// Normalizes a predicate identifier to the lemma used for matching
/// against text: lowercased, and underscore compounds reduced to their
/// last segment (`school_subject` -> `subject`).
pub fn predicate_lemma(predicate: &str) -> String {
    let lower = predicate.to_lowercase();
    match lower.rsplit('_').next() {
        Some(last) if !last.is_empty() => last.to_string(),
        _ => lower,
    }
}

/// An atom inside a negation scope, with its absolute path and a flag
/// marking whether it references variables bound outside the scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeAtom {
    pub atom: Atom,
    pub path: NodePath,
    /// True when some argument variable is bound by a quantifier outside
    /// the negation body (or is free altogether). Such atoms relate the
    /// scope to outer material rather than describing the negated content.
    pub externally_bound: bool,
}

impl ScopeAtom {
    pub fn lemma(&self) -> String {
        predicate_lemma(&self.atom.predicate)
    }
}

/// One logical negation in a formula: the `Not` node at `path`, with the
/// atoms of its scope in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationSite {
    /// 1-based index in pre-order traversal.
    pub site_id: usize,
    pub path: NodePath,
    /// Atoms in the negation body, document order. With the default
    /// collection mode, atoms under nested negations belong to the nested
    /// site only and are not listed here.
    pub scope_atoms: Vec<ScopeAtom>,
    /// Normalized predicate lemmas of `scope_atoms`.
    pub scope_lemmas: BTreeSet<String>,
}

impl NegationSite {
    /// Lemma set used for cue alignment: scope lemmas without atoms that
    /// reference variables bound outside the scope and without the given
    /// role predicates (`actor`, `theme`, ...).
    pub fn alignment_lemmas(&self, role_exclusions: &BTreeSet<String>) -> BTreeSet<String> {
        self.scope_atoms
            .iter()
            .filter(|a| !a.externally_bound)
            .map(|a| a.lemma())
            .filter(|l| !role_exclusions.contains(l))
            .collect()
    }

    /// First scope atom whose normalized predicate equals `lemma`.
    pub fn find_atom(&self, lemma: &str) -> Option<&ScopeAtom> {
        self.scope_atoms.iter().find(|a| a.lemma() == lemma)
    }
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(predicate, args))
    }

    pub fn negated(body: Formula) -> Formula {
        Formula::Not(Box::new(body))
    }

    /// Number of children of this node.
    pub fn arity(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(_) | Formula::Exists(_, _) | Formula::Forall(_, _) => 1,
            Formula::And(fs) | Formula::Or(fs) => fs.len(),
            Formula::Implies(_, _) => 2,
        }
    }

    pub fn child(&self, index: usize) -> Option<&Formula> {
        match self {
            Formula::Atom(_) => None,
            Formula::Not(b) | Formula::Exists(_, b) | Formula::Forall(_, b) => {
                (index == 0).then_some(b.as_ref())
            }
            Formula::And(fs) | Formula::Or(fs) => fs.get(index),
            Formula::Implies(a, c) => match index {
                0 => Some(a.as_ref()),
                1 => Some(c.as_ref()),
                _ => None,
            },
        }
    }

    /// Resolves a path to the node it addresses.
    pub fn node_at(&self, path: &[usize]) -> Option<&Formula> {
        let mut node = self;
        for &step in path {
            node = node.child(step)?;
        }
        Some(node)
    }

    /// Replaces the node at `path` with the result of `rewrite`.
    fn rewrite_at(self, path: &[usize], rewrite: &mut dyn FnMut(Formula) -> Formula) -> Formula {
        if path.is_empty() {
            return rewrite(self);
        }
        let step = path[0];
        let rest = &path[1..];
        match self {
            Formula::Atom(_) => self,
            Formula::Not(b) => Formula::Not(Box::new(b.rewrite_at(rest, rewrite))),
            Formula::Exists(vs, b) => Formula::Exists(vs, Box::new(b.rewrite_at(rest, rewrite))),
            Formula::Forall(vs, b) => Formula::Forall(vs, Box::new(b.rewrite_at(rest, rewrite))),
            Formula::And(fs) => Formula::And(
                fs.into_iter()
                    .enumerate()
                    .map(|(i, f)| {
                        if i == step {
                            f.rewrite_at(rest, rewrite)
                        } else {
                            f
                        }
                    })
                    .collect(),
            ),
            Formula::Or(fs) => Formula::Or(
                fs.into_iter()
                    .enumerate()
                    .map(|(i, f)| {
                        if i == step {
                            f.rewrite_at(rest, rewrite)
                        } else {
                            f
                        }
                    })
                    .collect(),
            ),
            Formula::Implies(a, c) => {
                if step == 0 {
                    Formula::Implies(Box::new(a.rewrite_at(rest, rewrite)), c)
                } else {
                    Formula::Implies(a, Box::new(c.rewrite_at(rest, rewrite)))
                }
            }
        }
    }

    /// All atoms in document order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    /// Number of `Not` nodes.
    pub fn not_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |f| {
            if matches!(f, Formula::Not(_)) {
                n += 1;
            }
        });
        n
    }

    fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula)) {
        visit(self);
        for i in 0..self.arity() {
            self.child(i).unwrap().walk(visit);
        }
    }

    /// Free variables of the formula.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut free = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut free);
        free
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for t in &a.args {
                    if let Term::Variable(v) = t {
                        if !bound.iter().any(|b| b == v) {
                            free.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Not(b) => b.collect_free(bound, free),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, free);
                }
            }
            Formula::Implies(a, c) => {
                a.collect_free(bound, free);
                c.collect_free(bound, free);
            }
            Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                let depth = bound.len();
                bound.extend(vs.iter().cloned());
                b.collect_free(bound, free);
                bound.truncate(depth);
            }
        }
    }
}

/// Removes every `Not` whose immediate body is another `Not`. Idempotent;
/// all other structure is preserved.
pub fn remove_double_negation(f: Formula) -> Formula {
    match f {
        Formula::Atom(_) => f,
        Formula::Not(b) => {
            let body = remove_double_negation(*b);
            match body {
                Formula::Not(inner) => *inner,
                other => Formula::Not(Box::new(other)),
            }
        }
        Formula::And(fs) => Formula::And(fs.into_iter().map(remove_double_negation).collect()),
        Formula::Or(fs) => Formula::Or(fs.into_iter().map(remove_double_negation).collect()),
        Formula::Exists(vs, b) => Formula::Exists(vs, Box::new(remove_double_negation(*b))),
        Formula::Forall(vs, b) => Formula::Forall(vs, Box::new(remove_double_negation(*b))),
        Formula::Implies(a, c) => Formula::Implies(
            Box::new(remove_double_negation(*a)),
            Box::new(remove_double_negation(*c)),
        ),
    }
}

/// Controls whether atoms under a nested negation also count towards the
/// scope of the enclosing negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NestedScope {
    /// Atoms below an inner `Not` belong to the inner site only.
    #[default]
    Exclude,
    /// Atoms below an inner `Not` are also listed for the outer site.
    Include,
}

/// Enumerates the negation sites of `f` in document (pre-order) order,
/// excluding nested-negation atoms from outer scopes.
pub fn collect_negations(f: &Formula) -> Vec<NegationSite> {
    collect_negations_with(f, NestedScope::Exclude)
}

/// Like [`collect_negations`] with an explicit nested-scope mode.
pub fn collect_negations_with(f: &Formula, nested: NestedScope) -> Vec<NegationSite> {
    struct Walker {
        nested: NestedScope,
        sites: Vec<NegationSite>,
        bound: Vec<String>,
        path: NodePath,
    }

    impl Walker {
        fn visit(&mut self, f: &Formula) {
            match f {
                Formula::Not(body) => {
                    let outer_depth = self.bound.len();
                    let mut atoms = Vec::new();
                    self.path.push(0);
                    self.scope_atoms(body, outer_depth, &mut atoms);
                    self.path.pop();
                    let lemmas = atoms.iter().map(ScopeAtom::lemma).collect();
                    self.sites.push(NegationSite {
                        site_id: self.sites.len() + 1,
                        path: self.path.clone(),
                        scope_atoms: atoms,
                        scope_lemmas: lemmas,
                    });
                    self.path.push(0);
                    self.visit(body);
                    self.path.pop();
                }
                Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                    let depth = self.bound.len();
                    self.bound.extend(vs.iter().cloned());
                    self.path.push(0);
                    self.visit(b);
                    self.path.pop();
                    self.bound.truncate(depth);
                }
                _ => {
                    for i in 0..f.arity() {
                        self.path.push(i);
                        self.visit(f.child(i).unwrap());
                        self.path.pop();
                    }
                }
            }
        }

        /// Collects scope atoms for the site whose body starts at the
        /// current path. `outer_depth` is the binding-stack depth at the
        /// `Not` node; an atom variable resolved at or below that depth
        /// (or unbound) is externally bound.
        fn scope_atoms(&mut self, f: &Formula, outer_depth: usize, out: &mut Vec<ScopeAtom>) {
            match f {
                Formula::Atom(a) => {
                    let external = a.args.iter().any(|t| match t {
                        Term::Variable(v) => match self.bound.iter().rposition(|b| b == v) {
                            Some(pos) => pos < outer_depth,
                            None => true,
                        },
                        Term::Constant(_) => false,
                    });
                    out.push(ScopeAtom {
                        atom: a.clone(),
                        path: self.path.clone(),
                        externally_bound: external,
                    });
                }
                Formula::Not(b) => {
                    if self.nested == NestedScope::Include {
                        self.path.push(0);
                        self.scope_atoms(b, outer_depth, out);
                        self.path.pop();
                    }
                }
                Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                    let depth = self.bound.len();
                    self.bound.extend(vs.iter().cloned());
                    self.path.push(0);
                    self.scope_atoms(b, outer_depth, out);
                    self.path.pop();
                    self.bound.truncate(depth);
                }
                _ => {
                    for i in 0..f.arity() {
                        self.path.push(i);
                        self.scope_atoms(f.child(i).unwrap(), outer_depth, out);
                        self.path.pop();
                    }
                }
            }
        }
    }

    let mut walker = Walker {
        nested,
        sites: Vec::new(),
        bound: Vec::new(),
        path: Vec::new(),
    };
    walker.visit(f);
    walker.sites
}

/// Narrows the negation at `site` to the first atom (document order)
/// whose normalized predicate equals `negatus_lemma`: the `Not` is
/// removed and that atom is wrapped in `Not` instead. Every other atom,
/// quantifier and connective of the former scope is preserved.
pub fn narrow_scope(
    f: Formula,
    site: &NegationSite,
    negatus_lemma: &str,
) -> Result<Formula, FolError> {
    narrow_scope_at(f, &site.path, negatus_lemma).map(|(f, _)| f)
}

/// Internal variant of [`narrow_scope`] that also reports the path of the
/// freshly created `Not` wrapper, so a follow-up substitution can address
/// it without re-searching the formula.
pub(crate) fn narrow_scope_at(
    f: Formula,
    path: &[usize],
    negatus_lemma: &str,
) -> Result<(Formula, NodePath), FolError> {
    // Locate the target atom inside the body, skipping nested negations:
    // their atoms belong to the nested site.
    let rel = {
        let Some(Formula::Not(body)) = f.node_at(path) else {
            return Err(FolError::NotANegation);
        };
        let mut rel_path = None;
        find_atom_path(body, negatus_lemma, &mut Vec::new(), &mut rel_path);
        match rel_path {
            Some(r) => r,
            None => {
                return Err(FolError::NoMatchingAtom {
                    lemma: negatus_lemma.to_string(),
                })
            }
        }
    };

    let mut wrap_rel = rel;
    let rewritten = f.rewrite_at(path, &mut |node| {
        let Formula::Not(body) = node else {
            unreachable!()
        };
        body.rewrite_at(&wrap_rel, &mut |atom| Formula::Not(Box::new(atom)))
    });
    let mut new_path = path.to_vec();
    new_path.append(&mut wrap_rel);
    Ok((rewritten, new_path))
}

fn find_atom_path(f: &Formula, lemma: &str, path: &mut NodePath, found: &mut Option<NodePath>) {
    if found.is_some() {
        return;
    }
    match f {
        Formula::Atom(a) => {
            if predicate_lemma(&a.predicate) == lemma {
                *found = Some(path.clone());
            }
        }
        Formula::Not(_) => {}
        _ => {
            for i in 0..f.arity() {
                path.push(i);
                find_atom_path(f.child(i).unwrap(), lemma, path, found);
                path.pop();
            }
        }
    }
}

/// Replaces the negated atom at `site` (which must be `Not(Atom)`, i.e.
/// an already narrowed scope) by a positive atom with `inverse` as
/// predicate. Decreases the `Not` count by one.
pub fn replace_negated_atom(
    f: Formula,
    site: &NegationSite,
    inverse: &str,
) -> Result<Formula, FolError> {
    replace_negated_atom_at(f, &site.path, inverse)
}

pub(crate) fn replace_negated_atom_at(
    f: Formula,
    path: &[usize],
    inverse: &str,
) -> Result<Formula, FolError> {
    match f.node_at(path) {
        Some(Formula::Not(body)) => {
            if !matches!(body.as_ref(), Formula::Atom(_)) {
                return Err(FolError::ScopeNotAtomic);
            }
        }
        _ => return Err(FolError::NotANegation),
    }
    let inverse = inverse.to_string();
    Ok(f.rewrite_at(path, &mut |node| {
        let Formula::Not(body) = node else {
            unreachable!()
        };
        let Formula::Atom(atom) = *body else {
            unreachable!()
        };
        Formula::Atom(Atom::new(inverse.clone(), atom.args))
    }))
}
