//! Canonical text rendering of formulas.
//!
//! `parse_formula(print_formula(f))` reproduces `f` for every formula the
//! parser accepts. Quantifier bodies are always parenthesized, negation
//! prints as `~ ` followed by its body, and `And`/`Or`/`Implies` carry
//! their own surrounding parentheses.

use std::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => {
                write!(f, "{}(", a.predicate)?;
                for (i, t) in a.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Formula::Not(b) => write!(f, "~ {b}"),
            Formula::And(items) => write_group(f, items, " & "),
            Formula::Or(items) => write_group(f, items, " | "),
            Formula::Implies(a, c) => write!(f, "({a} => {c})"),
            Formula::Exists(vars, b) => write_quant(f, '?', vars, b),
            Formula::Forall(vars, b) => write_quant(f, '!', vars, b),
        }
    }
}

fn write_group(f: &mut fmt::Formatter<'_>, items: &[Formula], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(")")
}

fn write_quant(
    f: &mut fmt::Formatter<'_>,
    mark: char,
    vars: &[String],
    body: &Formula,
) -> fmt::Result {
    write!(f, "{mark} [")?;
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(v)?;
    }
    f.write_str("] : ")?;
    // The body is always rendered inside parentheses; connectives bring
    // their own, everything else gets wrapped.
    match body {
        Formula::And(_) | Formula::Or(_) | Formula::Implies(_, _) => write!(f, "{body}"),
        other => write!(f, "({other})"),
    }
}

/// Canonical text of a formula.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_formula, Atom};

    #[test]
    fn atom_under_exists() {
        let f = Formula::Exists(
            vec!["A".into()],
            Box::new(Formula::Atom(Atom::new(
                "math",
                vec![Term::Variable("A".into())],
            ))),
        );
        assert_eq!(print_formula(&f), "? [A] : (math(A))");
    }

    #[test]
    fn narrowed_formula_contains_negated_atom_text() {
        let text = "? [A,B,C,D,E] : (person(A) & person(B) & then(C) & manner(D,C) & \
                    topic(D,E) & actor(D,B) & realize(D) & \
                    ? [F,G] : (at(G,F) & math(F) & theme(G,A) & ~ good(G)))";
        let f = parse_formula(text).unwrap();
        let printed = print_formula(&f);
        assert!(printed.contains("~ good(G)"));
        assert_eq!(printed.matches('~').count(), 1);
        assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn negation_of_group_keeps_parentheses() {
        let f = parse_formula("? [A] : (~ (p(A) & q(A)))").unwrap();
        assert_eq!(print_formula(&f), "? [A] : (~ (p(A) & q(A)))");
    }
}
