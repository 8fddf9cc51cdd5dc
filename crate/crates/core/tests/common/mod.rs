//! Shared test support: random formula generators, a brute-force truth
//! evaluator, and an exhaustive mutual-argmax oracle. Everything here is
//! written independently of the library's own code paths so it can serve
//! as an oracle for them.
#![allow(dead_code)] // each test target uses its own subset

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use negatus::fol::{Atom, Formula, NegationSite, ScopeAtom, Term};
use negatus::textprep::WordWindow;
use negatus::wordnet::Lexicon;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixture_lexicon() -> Lexicon {
    let mut lexicon =
        Lexicon::load(&data_dir().join("wordnet-mini")).expect("bundled lexicon loads");
    lexicon.add_overrides(negatus::DEFAULT_ANTONYM_OVERRIDES);
    lexicon
}

const PREDICATES: &[&str] = &[
    "at",
    "math",
    "good",
    "theme",
    "person",
    "realize",
    "school_subject",
    "like",
    "eat",
    "raisin",
];
const CONSTANTS: &[&str] = &["a", "b", "c", "bob"];
const VAR_POOL: &[&str] = &["A", "B", "C", "D", "E", "F", "G", "H"];

fn gen_term(rng: &mut impl Rng, bound: &[String]) -> Term {
    if !bound.is_empty() && rng.gen_bool(0.7) {
        Term::Variable(bound.choose(rng).unwrap().clone())
    } else {
        Term::Constant(CONSTANTS.choose(rng).unwrap().to_string())
    }
}

fn gen_atom(rng: &mut impl Rng, bound: &[String]) -> Formula {
    let arity = rng.gen_range(1..=3);
    let args = (0..arity).map(|_| gen_term(rng, bound)).collect();
    Formula::Atom(Atom::new(PREDICATES.choose(rng).unwrap().to_string(), args))
}

fn gen_subformula(rng: &mut impl Rng, depth: usize, bound: &mut Vec<String>) -> Formula {
    if depth == 0 {
        return gen_atom(rng, bound);
    }
    match rng.gen_range(0..10) {
        0..=2 => gen_atom(rng, bound),
        3 | 4 => Formula::Not(Box::new(gen_subformula(rng, depth - 1, bound))),
        5 | 6 => {
            let n = rng.gen_range(2..=3);
            Formula::And(
                (0..n)
                    .map(|_| gen_subformula(rng, depth - 1, bound))
                    .collect(),
            )
        }
        7 => {
            let n = rng.gen_range(2..=3);
            Formula::Or(
                (0..n)
                    .map(|_| gen_subformula(rng, depth - 1, bound))
                    .collect(),
            )
        }
        8 => Formula::Implies(
            Box::new(gen_subformula(rng, depth - 1, bound)),
            Box::new(gen_subformula(rng, depth - 1, bound)),
        ),
        _ => {
            let n = rng.gen_range(1..=2);
            let vars: Vec<String> = (0..n)
                .map(|_| VAR_POOL.choose(rng).unwrap().to_string())
                .collect();
            let marker = rng.gen_bool(0.5);
            let depth_before = bound.len();
            bound.extend(vars.iter().cloned());
            let body = Box::new(gen_subformula(rng, depth - 1, bound));
            bound.truncate(depth_before);
            if marker {
                Formula::Exists(vars, body)
            } else {
                Formula::Forall(vars, body)
            }
        }
    }
}

/// A random closed formula: a quantifier prefix over a few variables with
/// a random body that only uses bound variables and constants.
pub fn gen_closed_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    let n = rng.gen_range(1..=3);
    let mut vars: Vec<String> = VAR_POOL
        .choose_multiple(rng, n)
        .map(|s| s.to_string())
        .collect();
    vars.sort();
    let mut bound = vars.clone();
    let body = gen_subformula(rng, depth, &mut bound);
    if rng.gen_bool(0.5) {
        Formula::Exists(vars, Box::new(body))
    } else {
        Formula::Forall(vars, Box::new(body))
    }
}

fn gen_ground_atom(rng: &mut impl Rng, preds: &[&str]) -> Formula {
    let arity = rng.gen_range(1..=2);
    let args = (0..arity)
        .map(|_| Term::Constant(CONSTANTS.choose(rng).unwrap().to_string()))
        .collect();
    Formula::Atom(Atom::new(preds.choose(rng).unwrap().to_string(), args))
}

/// A random quantifier-free ground formula over at most `max_preds`
/// predicates with constant arguments.
pub fn gen_ground_formula(rng: &mut impl Rng, depth: usize, max_preds: usize) -> Formula {
    let preds = &PREDICATES[..max_preds.min(PREDICATES.len())];
    if depth == 0 {
        return gen_ground_atom(rng, preds);
    }
    match rng.gen_range(0..8) {
        0 | 1 => gen_ground_atom(rng, preds),
        2 | 3 => Formula::Not(Box::new(gen_ground_formula(rng, depth - 1, max_preds))),
        4 | 5 => {
            let n = rng.gen_range(2..=3);
            Formula::And(
                (0..n)
                    .map(|_| gen_ground_formula(rng, depth - 1, max_preds))
                    .collect(),
            )
        }
        6 => {
            let n = rng.gen_range(2..=3);
            Formula::Or(
                (0..n)
                    .map(|_| gen_ground_formula(rng, depth - 1, max_preds))
                    .collect(),
            )
        }
        _ => Formula::Implies(
            Box::new(gen_ground_formula(rng, depth - 1, max_preds)),
            Box::new(gen_ground_formula(rng, depth - 1, max_preds)),
        ),
    }
}

fn atom_key(atom: &Atom) -> String {
    let args: Vec<&str> = atom.args.iter().map(Term::name).collect();
    format!("{}({})", atom.predicate, args.join(","))
}

/// All ground atom keys of a quantifier-free formula.
pub fn ground_atoms(f: &Formula) -> BTreeSet<String> {
    f.atoms().into_iter().map(atom_key).collect()
}

/// Brute-force truth evaluation of a quantifier-free ground formula under
/// an interpretation mapping atom keys to truth values.
pub fn eval_ground(f: &Formula, interpretation: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Atom(a) => *interpretation.get(&atom_key(a)).unwrap_or(&false),
        Formula::Not(b) => !eval_ground(b, interpretation),
        Formula::And(items) => items.iter().all(|i| eval_ground(i, interpretation)),
        Formula::Or(items) => items.iter().any(|i| eval_ground(i, interpretation)),
        Formula::Implies(a, c) => !eval_ground(a, interpretation) || eval_ground(c, interpretation),
        Formula::Exists(_, _) | Formula::Forall(_, _) => {
            panic!("eval_ground is only defined for quantifier-free formulas")
        }
    }
}

/// Exhaustive mutual-argmax oracle over raw lemma sets, written straight
/// from the assignment rule: for cue `i` take the smallest `j` maximizing
/// the intersection, check that `i` is in turn the smallest maximizer for
/// `j`, and require a nonempty intersection.
pub fn oracle_mutual_argmax(
    cue_sets: &[BTreeSet<String>],
    site_sets: &[BTreeSet<String>],
) -> Vec<(usize, usize)> {
    let inter =
        |a: &BTreeSet<String>, b: &BTreeSet<String>| a.iter().filter(|x| b.contains(*x)).count();
    let mut pairs = Vec::new();
    for i in 0..cue_sets.len() {
        let mut best_j: Option<usize> = None;
        for j in 0..site_sets.len() {
            let c = inter(&cue_sets[i], &site_sets[j]);
            if best_j
                .map(|bj| c > inter(&cue_sets[i], &site_sets[bj]))
                .unwrap_or(true)
            {
                best_j = Some(j);
            }
        }
        let Some(j) = best_j else { continue };
        let mut best_i: Option<usize> = None;
        for i2 in 0..cue_sets.len() {
            let c = inter(&cue_sets[i2], &site_sets[j]);
            if best_i
                .map(|bi| c > inter(&cue_sets[bi], &site_sets[j]))
                .unwrap_or(true)
            {
                best_i = Some(i2);
            }
        }
        if best_i == Some(i) && inter(&cue_sets[i], &site_sets[j]) > 0 {
            pairs.push((i + 1, j + 1));
        }
    }
    pairs
}

/// Window stub carrying only a lemma set, for alignment tests.
pub fn make_window(cue_id: usize, lemmas: &BTreeSet<String>) -> WordWindow {
    WordWindow {
        cue_id,
        member_tokens: Vec::new(),
        lemma_set: lemmas.clone(),
    }
}

/// Site stub whose alignment lemma set equals `lemmas` (no role
/// predicates, nothing externally bound).
pub fn make_site(site_id: usize, lemmas: &BTreeSet<String>) -> NegationSite {
    let scope_atoms: Vec<ScopeAtom> = lemmas
        .iter()
        .map(|l| ScopeAtom {
            atom: Atom::new(l.clone(), vec![Term::Constant("a".into())]),
            path: vec![site_id],
            externally_bound: false,
        })
        .collect();
    let scope_lemmas = lemmas.clone();
    NegationSite {
        site_id,
        path: vec![site_id],
        scope_atoms,
        scope_lemmas,
    }
}

/// Random lemma set over a small vocabulary.
pub fn gen_lemma_set(rng: &mut impl Rng, vocab: &[&str], max_len: usize) -> BTreeSet<String> {
    let len = rng.gen_range(0..=max_len);
    vocab
        .choose_multiple(rng, len)
        .map(|s| s.to_string())
        .collect()
}
