//! Sentence preprocessing: tokenization, stopword marking, lemma/POS
//! annotation, negation cue detection and word-window construction.

use std::collections::BTreeSet;

use crate::align::Strategy;
use crate::wordnet::{Lexicon, PosClass};

/// A single token of a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 0-based position in the sentence.
    pub index: usize,
    pub surface: String,
    /// Base form; falls back to the lowercased surface.
    pub lemma: String,
    /// Penn Treebank tag, or empty when unknown.
    pub pos: String,
    pub is_stopword: bool,
    pub is_cue_part: bool,
}

impl Token {
    fn new(index: usize, surface: String) -> Self {
        let lemma = surface.to_lowercase();
        Token {
            index,
            surface,
            lemma,
            pos: String::new(),
            is_stopword: false,
            is_cue_part: false,
        }
    }

    /// True when the token contains at least one alphanumeric character.
    pub fn is_word(&self) -> bool {
        self.surface.chars().any(|c| c.is_alphanumeric())
    }

    fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

/// A tokenized, annotated sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskText {
    pub raw: String,
    pub tokens: Vec<Token>,
}

impl TaskText {
    /// Full preprocessing pipeline for plain text: tokenize, mark
    /// stopwords, and annotate lemma/POS from the lexicon when given.
    pub fn from_raw(raw: &str, stopwords: &StopwordList, lexicon: Option<&Lexicon>) -> TaskText {
        let mut tokens = tokenize(raw);
        mark_stopwords(&mut tokens, stopwords);
        if let Some(lexicon) = lexicon {
            annotate(&mut tokens, lexicon);
        }
        TaskText {
            raw: raw.to_string(),
            tokens,
        }
    }

    /// Wraps pre-annotated tokens (e.g. from a gold corpus, which carries
    /// its own lemma and POS columns). Only stopword flags are computed.
    pub fn from_tokens(raw: String, mut tokens: Vec<Token>, stopwords: &StopwordList) -> TaskText {
        mark_stopwords(&mut tokens, stopwords);
        TaskText { raw, tokens }
    }
}

/// A detected negation cue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cue {
    /// 1-based cue index, left to right.
    pub cue_id: usize,
    /// Contiguous token indices of the cue span.
    pub token_indices: Vec<usize>,
    /// Normalized cue string, e.g. `don't`, `can't`, `was not`, `no`.
    pub canonical: String,
}

/// The word window of a cue: up to `k` non-stopword tokens used for
/// alignment and negatus selection. Cue tokens are never members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordWindow {
    pub cue_id: usize,
    pub member_tokens: Vec<Token>,
    pub lemma_set: BTreeSet<String>,
}

/// The stopword list used when marking tokens. Matching is
/// lowercase-exact on the surface form.
#[derive(Debug, Clone)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// The bundled default list.
    pub fn default_list() -> StopwordList {
        Self::from_text(crate::DEFAULT_STOPWORDS)
    }

    /// Parses one lowercase word per line; blank lines and `#` comments
    /// are ignored.
    pub fn from_text(text: &str) -> StopwordList {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        StopwordList { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Splits raw text into tokens. Punctuation becomes separate tokens;
/// clitics split off: `don't` -> `do` + `n't`, while other apostrophe
/// clitics drop the apostrophe (`he's` -> `he` + `s`), matching the
/// stopword list entries for the residues.
pub fn tokenize(raw: &str) -> Vec<Token> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut push = |surface: &str| {
        if !surface.is_empty() {
            tokens.push(Token::new(tokens.len(), surface.to_string()));
        }
    };

    let mut word = String::new();
    for c in raw.chars() {
        if c.is_alphanumeric() || c == '\'' || c == '\u{2019}' {
            word.push(if c == '\u{2019}' { '\'' } else { c });
        } else {
            split_word(&word, &mut push);
            word.clear();
            if !c.is_whitespace() {
                push(&c.to_string());
            }
        }
    }
    split_word(&word, &mut push);
    tokens
}

fn split_word(word: &str, push: &mut impl FnMut(&str)) {
    if word.is_empty() {
        return;
    }
    let lower = word.to_lowercase();
    if lower.ends_with("n't") && word.len() > 3 {
        let split_at = word.len() - 3;
        push(&word[..split_at]);
        push(&word[split_at..]);
        return;
    }
    if word.contains('\'') && lower != "n't" {
        for part in word.split('\'') {
            push(part);
        }
        return;
    }
    push(word);
}

/// Sets stopword flags: punctuation tokens and every token whose
/// lowercased surface is in the list.
pub fn mark_stopwords(tokens: &mut [Token], stopwords: &StopwordList) {
    for t in tokens.iter_mut() {
        t.is_stopword = !t.is_word() || stopwords.contains(&t.lower());
    }
}

/// Maps a Penn Treebank tag to a lexicon class.
pub fn pos_class_of_tag(tag: &str) -> Option<PosClass> {
    if tag.starts_with("NN") {
        Some(PosClass::Noun)
    } else if tag.starts_with("VB") || tag == "MD" {
        Some(PosClass::Verb)
    } else if tag.starts_with("JJ") {
        Some(PosClass::Adjective)
    } else if tag.starts_with("RB") {
        Some(PosClass::Adverb)
    } else {
        None
    }
}

/// Base form of a token. A gold POS tag selects the lexicon class;
/// otherwise the class is guessed by index-file priority (verb, noun,
/// adjective, adverb). Without any lexicon hit the lowercased surface is
/// returned.
pub fn lemmatize(token: &Token, lexicon: Option<&Lexicon>) -> String {
    let fallback = token.lower();
    let Some(lexicon) = lexicon else {
        return fallback;
    };
    if !token.is_word() {
        return fallback;
    }
    if let Some(class) = pos_class_of_tag(&token.pos) {
        if let Some(base) = lexicon.morphy(&fallback, class).into_iter().next() {
            return base;
        }
        return fallback;
    }
    match lexicon.guess(&fallback) {
        Some((_, base)) => base,
        None => fallback,
    }
}

/// Fills in lemma and POS for tokens that carry no POS tag yet, guessing
/// the class from the lexicon. Gold annotations are left untouched.
pub fn annotate(tokens: &mut [Token], lexicon: &Lexicon) {
    for t in tokens.iter_mut() {
        if !t.pos.is_empty() || !t.is_word() {
            continue;
        }
        if let Some((class, base)) = lexicon.guess(&t.lower()) {
            t.pos = match class {
                PosClass::Noun => "NN",
                PosClass::Verb => "VB",
                PosClass::Adjective => "JJ",
                PosClass::Adverb => "RB",
            }
            .to_string();
            t.lemma = base;
        }
    }
}

const MULTIWORD_AUXILIARIES: &[&str] =
    &["can", "could", "should", "is", "are", "was", "were", "will"];
const SINGLE_CUES: &[&str] = &["not", "no", "never", "nor", "nothing", "cannot", "n't"];

/// Detects syntactic negation cues, left to right, multiword forms first.
/// `n't` merges with its auxiliary into one cue (`do` + `n't` has the
/// canonical form `don't`). Matched tokens get their `is_cue_part` flag
/// set.
pub fn detect_cues(tokens: &mut [Token]) -> Vec<Cue> {
    let mut cues: Vec<Cue> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let lower = tokens[i].lower();
        if MULTIWORD_AUXILIARIES.contains(&lower.as_str())
            && tokens
                .get(i + 1)
                .map(|t| t.lower() == "not")
                .unwrap_or(false)
        {
            cues.push(Cue {
                cue_id: cues.len() + 1,
                token_indices: vec![i, i + 1],
                canonical: format!("{lower} not"),
            });
            tokens[i].is_cue_part = true;
            tokens[i + 1].is_cue_part = true;
            i += 2;
            continue;
        }
        if lower == "n't" {
            let has_aux = i > 0 && tokens[i - 1].is_word() && !tokens[i - 1].is_cue_part;
            let (indices, canonical) = if has_aux {
                (vec![i - 1, i], format!("{}n't", tokens[i - 1].lower()))
            } else {
                (vec![i], "n't".to_string())
            };
            for &idx in &indices {
                tokens[idx].is_cue_part = true;
            }
            cues.push(Cue {
                cue_id: cues.len() + 1,
                token_indices: indices,
                canonical,
            });
            i += 1;
            continue;
        }
        if SINGLE_CUES.contains(&lower.as_str()) {
            tokens[i].is_cue_part = true;
            cues.push(Cue {
                cue_id: cues.len() + 1,
                token_indices: vec![i],
                canonical: lower,
            });
        }
        i += 1;
    }
    cues
}

/// Builds the word window for a cue.
///
/// All strategies take the first `k` non-stopwords strictly after the cue.
/// The combination strategy differs: when the token immediately left of
/// the cue is a non-stopword, it opens the window and only `k - 1`
/// following non-stopwords are added. Cue tokens are never included and
/// the sentence boundary truncates the window.
pub fn word_window(tokens: &[Token], cue: &Cue, k: usize, strategy: Strategy) -> WordWindow {
    let eligible = |t: &Token| !t.is_stopword && !t.is_cue_part;
    let mut members: Vec<Token> = Vec::new();

    if strategy == Strategy::Comb {
        let first = *cue.token_indices.first().expect("cue has tokens");
        if first > 0 && eligible(&tokens[first - 1]) {
            members.push(tokens[first - 1].clone());
        }
    }

    let last = *cue.token_indices.last().expect("cue has tokens");
    for t in tokens.iter().skip(last + 1) {
        if members.len() >= k {
            break;
        }
        if eligible(t) {
            members.push(t.clone());
        }
    }
    members.truncate(k);

    let lemma_set = members.iter().map(|t| t.lemma.to_lowercase()).collect();
    WordWindow {
        cue_id: cue.cue_id,
        member_tokens: members,
        lemma_set,
    }
}
