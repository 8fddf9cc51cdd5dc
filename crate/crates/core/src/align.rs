//! Cue-to-negation alignment and negatus determination.
//!
//! A sentence has negation cues `x_1..x_n` with word windows `M(x_i)`;
//! its formula has negation sites `y_1..y_m` with scope lemma sets
//! `M(y_j)`. A cue and a site are assigned to each other when their
//! intersection is nonempty and maximal with respect to both indices
//! (mutual argmax). For each assignment a negatus word is selected by the
//! configured strategy, the formula's negation scope is narrowed to the
//! matching atom, and the negated atom is replaced by its antonym when
//! the lexicon offers one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::fol::{
    self, collect_negations_with, remove_double_negation, Formula, NegationSite, NestedScope, Term,
};
use crate::textprep::{self, Cue, TaskText, Token, WordWindow};
use crate::wordnet::{Lexicon, PosClass};

/// Negatus determination strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Modal cues yield the modal; otherwise the first window word.
    Baseline,
    /// First non-stopword in the window (modal cues yield the modal).
    Fns,
    /// First verb in the window; no negatus when the window has none.
    Fv,
    /// First verb, falling back to the first-non-stopword rule.
    FvFns,
    /// Cue-class table: modals map to the modal, copula cues and
    /// `nothing` take the first window word, `no` takes the first noun
    /// after the cue, everything else the first verb, with the first
    /// window word as final fallback. Uses the left-extended window.
    Comb,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Baseline,
        Strategy::Fns,
        Strategy::Fv,
        Strategy::FvFns,
        Strategy::Comb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::Fns => "fns",
            Strategy::Fv => "fv",
            Strategy::FvFns => "fv-fns",
            Strategy::Comb => "comb",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        match s.to_lowercase().as_str() {
            "baseline" => Some(Strategy::Baseline),
            "fns" => Some(Strategy::Fns),
            "fv" => Some(Strategy::Fv),
            "fv-fns" | "fv+fns" | "fvfns" => Some(Strategy::FvFns),
            "comb" | "combination" => Some(Strategy::Comb),
            _ => None,
        }
    }
}

/// A matched cue/site pair with the lemma overlap that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub cue_id: usize,
    pub site_id: usize,
    pub overlap: BTreeSet<String>,
}

impl Assignment {
    pub fn overlap_size(&self) -> usize {
        self.overlap.len()
    }
}

/// The negated word chosen for an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Negatus {
    pub cue_id: usize,
    /// Surface words, in order. The strategies emit a single word; gold
    /// annotations may span several.
    pub words: Vec<String>,
    /// Primary lemma used for atom matching and antonym lookup.
    pub lemma: String,
    /// Lexicon class of the negatus, when known.
    pub class: Option<PosClass>,
    /// The scope atom whose predicate matches the lemma, when one exists
    /// in the assigned site.
    pub matched_atom: Option<crate::fol::Atom>,
    /// Antonym substituted into the formula, when the lexicon offered one.
    pub inverse: Option<String>,
}

/// A performed antonym substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub predicate: String,
    pub args: Vec<Term>,
    pub inverse: String,
}

impl std::fmt::Display for Substitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let args: Vec<&str> = self.args.iter().map(Term::name).collect();
        write!(
            f,
            "{}({}) -> {}",
            self.predicate,
            args.join(","),
            self.inverse
        )
    }
}

/// Full outcome of treating the negations of one sentence/formula pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreatmentResult {
    pub cues: Vec<Cue>,
    pub sites: Vec<NegationSite>,
    pub assignments: Vec<Assignment>,
    pub negati: Vec<Negatus>,
    pub rewritten: Formula,
    pub unmatched_cues: Vec<usize>,
    pub unmatched_sites: Vec<usize>,
    pub substitutions: Vec<Substitution>,
}

impl TreatmentResult {
    pub fn negatus_for_cue(&self, cue_id: usize) -> Option<&Negatus> {
        self.negati.iter().find(|n| n.cue_id == cue_id)
    }

    /// Set of negatus lemmas, for scoring.
    pub fn negatus_lemmas(&self) -> BTreeSet<String> {
        self.negati.iter().map(|n| n.lemma.clone()).collect()
    }
}

/// Pipeline configuration.
#[derive(Debug, Clone)]
pub struct TreatConfig {
    /// Word-window size.
    pub k: usize,
    pub strategy: Strategy,
    /// Role predicates excluded from scope lemma sets during alignment.
    pub role_exclusions: BTreeSet<String>,
    /// Whether atoms under a nested negation also count for the outer
    /// site's scope.
    pub nested_scope: NestedScope,
}

impl Default for TreatConfig {
    fn default() -> Self {
        TreatConfig {
            k: 3,
            strategy: Strategy::Comb,
            role_exclusions: crate::DEFAULT_ROLE_EXCLUSIONS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            nested_scope: NestedScope::Exclude,
        }
    }
}

impl TreatConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        TreatConfig {
            strategy,
            ..TreatConfig::default()
        }
    }
}

/// Mutual-argmax assignment between cue windows and negation sites.
///
/// For each cue `i`, let `j` maximize the intersection of `M(x_i)` with
/// `M(y_j)` and `i'` maximize the intersection of `M(y_j)` back over the
/// cues; `(i, j)` is emitted iff `i' = i` and the intersection is
/// nonempty. Ties break towards the smallest index.
pub fn assign(
    windows: &[WordWindow],
    sites: &[NegationSite],
    role_exclusions: &BTreeSet<String>,
) -> Vec<Assignment> {
    let site_lemmas: Vec<BTreeSet<String>> = sites
        .iter()
        .map(|s| s.alignment_lemmas(role_exclusions))
        .collect();
    let mut assignments = Vec::new();
    for (wi, window) in windows.iter().enumerate() {
        let Some(j) = argmax(
            site_lemmas
                .iter()
                .map(|m| intersection_size(&window.lemma_set, m)),
        ) else {
            continue;
        };
        let Some(i_back) = argmax(
            windows
                .iter()
                .map(|w| intersection_size(&w.lemma_set, &site_lemmas[j])),
        ) else {
            continue;
        };
        let overlap: BTreeSet<String> = window
            .lemma_set
            .intersection(&site_lemmas[j])
            .cloned()
            .collect();
        if i_back == wi && !overlap.is_empty() {
            assignments.push(Assignment {
                cue_id: window.cue_id,
                site_id: sites[j].site_id,
                overlap,
            });
        }
    }
    assignments
}

fn intersection_size(a: &BTreeSet<String>, b: &BTreeSet<String>) -> usize {
    a.intersection(b).count()
}

/// Index of the maximum value, smallest index on ties; `None` for an
/// empty iterator.
fn argmax(values: impl Iterator<Item = usize>) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, v) in values.enumerate() {
        match best {
            Some((_, bv)) if v <= bv => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// The modal verb recovered from modal negation cues, if any.
pub fn modal_of_cue(canonical: &str) -> Option<&'static str> {
    match canonical {
        "can't" | "cannot" | "can not" => Some("can"),
        "couldn't" | "could not" => Some("could"),
        "shouldn't" | "should not" => Some("should"),
        _ => None,
    }
}

fn is_copula_cue(canonical: &str) -> bool {
    matches!(
        canonical,
        "nothing"
            | "isn't"
            | "is not"
            | "aren't"
            | "are not"
            | "wasn't"
            | "was not"
            | "weren't"
            | "were not"
    )
}

fn is_verb(token: &Token) -> bool {
    token.pos.starts_with("VB")
}

fn is_noun(token: &Token) -> bool {
    token.pos.starts_with("NN")
}

fn token_negatus(cue_id: usize, token: &Token) -> Negatus {
    Negatus {
        cue_id,
        words: vec![token.surface.clone()],
        lemma: token.lemma.to_lowercase(),
        class: textprep::pos_class_of_tag(&token.pos),
        matched_atom: None,
        inverse: None,
    }
}

fn modal_negatus(cue_id: usize, modal: &str) -> Negatus {
    Negatus {
        cue_id,
        words: vec![modal.to_string()],
        lemma: modal.to_string(),
        class: Some(PosClass::Verb),
        matched_atom: None,
        inverse: None,
    }
}

/// Selects the negatus for a cue from its word window under a strategy.
/// Returns `None` when every rule fails, which can only happen with an
/// empty window on a non-modal cue (for `Fv`: a verb-less window).
pub fn pick_negatus(window: &WordWindow, cue: &Cue, strategy: Strategy) -> Option<Negatus> {
    let members = &window.member_tokens;
    let first = members.first();
    match strategy {
        Strategy::Baseline | Strategy::Fns => match modal_of_cue(&cue.canonical) {
            Some(modal) => Some(modal_negatus(cue.cue_id, modal)),
            None => first.map(|t| token_negatus(cue.cue_id, t)),
        },
        Strategy::Fv => members
            .iter()
            .find(|t| is_verb(t))
            .map(|t| token_negatus(cue.cue_id, t)),
        Strategy::FvFns => pick_negatus(window, cue, Strategy::Fv)
            .or_else(|| pick_negatus(window, cue, Strategy::Fns)),
        Strategy::Comb => {
            if let Some(modal) = modal_of_cue(&cue.canonical) {
                return Some(modal_negatus(cue.cue_id, modal));
            }
            if is_copula_cue(&cue.canonical) {
                return first.map(|t| token_negatus(cue.cue_id, t));
            }
            let preferred = if cue.canonical == "no" {
                // First noun after the cue; the left-extended member does
                // not qualify.
                let cue_end = *cue.token_indices.last().expect("cue has tokens");
                members.iter().find(|t| t.index > cue_end && is_noun(t))
            } else {
                members.iter().find(|t| is_verb(t))
            };
            preferred.or(first).map(|t| token_negatus(cue.cue_id, t))
        }
    }
}

/// Determines the antonym of a negatus lemma. The token's own class is
/// consulted first, then the remaining classes in guess order.
fn inverse_of(lexicon: &Lexicon, lemma: &str, class: Option<PosClass>) -> Option<String> {
    let mut classes: Vec<PosClass> = Vec::new();
    if let Some(c) = class {
        classes.push(c);
    }
    for c in PosClass::GUESS_ORDER {
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    for c in classes {
        let result = lexicon.antonym(lemma, c);
        if let Some(first) = result.antonyms.into_iter().next() {
            return Some(first);
        }
    }
    None
}

/// Runs the whole treatment for one sentence/formula pair: double
/// negation removal, cue detection, window and site construction, mutual
/// argmax assignment, negatus selection, scope narrowing and antonym
/// substitution.
///
/// `text` is expected to be preprocessed (see [`TaskText::from_raw`]);
/// cue flags are (re)computed here.
pub fn treat(
    text: &TaskText,
    formula: &Formula,
    config: &TreatConfig,
    lexicon: Option<&Lexicon>,
) -> TreatmentResult {
    let mut tokens = text.tokens.clone();
    for t in tokens.iter_mut() {
        t.is_cue_part = false;
    }
    let cues = textprep::detect_cues(&mut tokens);

    let formula = remove_double_negation(formula.clone());
    let sites = collect_negations_with(&formula, config.nested_scope);

    let windows: Vec<WordWindow> = cues
        .iter()
        .map(|cue| textprep::word_window(&tokens, cue, config.k, config.strategy))
        .collect();

    let assignments = assign(&windows, &sites, &config.role_exclusions);

    let mut negati = Vec::new();
    for assignment in &assignments {
        let window = windows
            .iter()
            .find(|w| w.cue_id == assignment.cue_id)
            .expect("assignment comes from a window");
        let cue = cues
            .iter()
            .find(|c| c.cue_id == assignment.cue_id)
            .expect("assignment comes from a cue");
        if let Some(negatus) = pick_negatus(window, cue, config.strategy) {
            negati.push(negatus);
        }
    }

    // Rewrite deepest sites first so shallower site paths stay valid.
    let mut order: Vec<&Assignment> = assignments.iter().collect();
    order.sort_by_key(|a| {
        let site = site_by_id(&sites, a.site_id);
        (std::cmp::Reverse(site.path.len()), a.site_id)
    });

    let mut rewritten = formula.clone();
    let mut substitutions = Vec::new();
    for assignment in order {
        let site = site_by_id(&sites, assignment.site_id);
        let Some(neg_idx) = negati.iter().position(|n| n.cue_id == assignment.cue_id) else {
            continue;
        };
        let (lemma, class) = (negati[neg_idx].lemma.clone(), negati[neg_idx].class);
        let Some(scope_atom) = site.find_atom(&lemma) else {
            // The rewrite only applies when the negatus corresponds to a
            // predicate in the scope.
            continue;
        };
        let matched = scope_atom.atom.clone();
        negati[neg_idx].matched_atom = Some(matched.clone());
        let Ok((narrowed, not_path)) = fol::narrow_scope_at(rewritten.clone(), &site.path, &lemma)
        else {
            continue;
        };
        rewritten = narrowed;
        let inverse = lexicon.and_then(|lex| inverse_of(lex, &lemma, class));
        if let Some(inverse) = inverse {
            if let Ok(replaced) =
                fol::replace_negated_atom_at(rewritten.clone(), &not_path, &inverse)
            {
                rewritten = replaced;
                negati[neg_idx].inverse = Some(inverse.clone());
                substitutions.push(Substitution {
                    predicate: matched.predicate,
                    args: matched.args,
                    inverse,
                });
            }
        }
    }

    let assigned_cues: BTreeSet<usize> = assignments.iter().map(|a| a.cue_id).collect();
    let assigned_sites: BTreeSet<usize> = assignments.iter().map(|a| a.site_id).collect();
    let unmatched_cues = cues
        .iter()
        .map(|c| c.cue_id)
        .filter(|id| !assigned_cues.contains(id))
        .collect();
    let unmatched_sites = sites
        .iter()
        .map(|s| s.site_id)
        .filter(|id| !assigned_sites.contains(id))
        .collect();

    TreatmentResult {
        cues,
        sites,
        assignments,
        negati,
        rewritten,
        unmatched_cues,
        unmatched_sites,
        substitutions,
    }
}

fn site_by_id(sites: &[NegationSite], id: usize) -> &NegationSite {
    sites
        .iter()
        .find(|s| s.site_id == id)
        .expect("site ids come from collect_negations")
}
