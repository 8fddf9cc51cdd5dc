//! negatus: locate what a negation actually negates, and rewrite the logic.
//!
//! Given a natural-language sentence and a first-order logic formula for
//! it (as produced by semantic parsers in the KnEWS family), this crate
//!
//! * detects syntactic negation cues in the sentence,
//! * enumerates the logical negations in the formula with their scopes,
//! * assigns cues to logical negations by mutual argmax over word-window /
//!   scope-lemma intersections,
//! * determines the negated word (the *negatus*) under five selectable
//!   strategies,
//! * narrows the formula's negation scope to the atom for that word, and
//! * where WordNet offers an antonym, replaces the negated atom by its
//!   inverse, removing the negation altogether.
//!
//! Supporting modules read CD-SCO negation corpora and JSON-lines task
//! files, and score predicted negati with *SEM-2012-style measure B.

pub mod align;
pub mod corpus;
pub mod eval;
pub mod fol;
pub mod textprep;
pub mod wordnet;

/// The stopword list used by the preprocessing pipeline, one word per
/// line. Modal and auxiliary verbs and negation cues are deliberately not
/// stopwords; they matter for negatus determination.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Supplementary antonym table consulted before WordNet, two columns per
/// line. Covers modal cues, which have no direct WordNet antonym.
pub const DEFAULT_ANTONYM_OVERRIDES: &str = include_str!("../data/antonym-overrides.txt");

/// Role predicates excluded from a negation scope's alignment lemmas:
/// they encode argument structure, not negated content.
pub const DEFAULT_ROLE_EXCLUSIONS: &[&str] = &[
    "actor",
    "theme",
    "topic",
    "manner",
    "agent",
    "patient",
    "recipient",
    "of",
];
