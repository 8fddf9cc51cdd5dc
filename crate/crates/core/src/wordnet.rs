//! WordNet 3.x database-file access: index/data/exception parsing, morphy
//! lemmatization, and antonym lookup.
//!
//! The loader reads the standard `index.*`, `data.*` and `*.exc` files of
//! a WordNet `dict` directory bit-exactly per the published format. A
//! supplementary override table (two columns, `lemma antonym`) can be
//! layered on top for inverses WordNet does not model, such as modal
//! verbs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// The four WordNet syntactic classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosClass {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PosClass {
    pub const ALL: [PosClass; 4] = [
        PosClass::Noun,
        PosClass::Verb,
        PosClass::Adjective,
        PosClass::Adverb,
    ];

    /// Lookup priority when guessing the class of an untagged word.
    pub const GUESS_ORDER: [PosClass; 4] = [
        PosClass::Verb,
        PosClass::Noun,
        PosClass::Adjective,
        PosClass::Adverb,
    ];

    fn file_suffix(self) -> &'static str {
        match self {
            PosClass::Noun => "noun",
            PosClass::Verb => "verb",
            PosClass::Adjective => "adj",
            PosClass::Adverb => "adv",
        }
    }

    fn from_marker(c: char) -> Option<PosClass> {
        match c {
            'n' => Some(PosClass::Noun),
            'v' => Some(PosClass::Verb),
            'a' | 's' => Some(PosClass::Adjective),
            'r' => Some(PosClass::Adverb),
            _ => None,
        }
    }

    /// Parses user-facing spellings (`noun`, `n`, `adjective`, ...).
    pub fn parse(s: &str) -> Option<PosClass> {
        match s.to_lowercase().as_str() {
            "n" | "noun" => Some(PosClass::Noun),
            "v" | "verb" => Some(PosClass::Verb),
            "a" | "adj" | "adjective" => Some(PosClass::Adjective),
            "r" | "adv" | "adverb" => Some(PosClass::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for PosClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosClass::Noun => "noun",
            PosClass::Verb => "verb",
            PosClass::Adjective => "adjective",
            PosClass::Adverb => "adverb",
        })
    }
}

#[derive(Debug, Error)]
pub enum WordnetError {
    #[error("missing WordNet file: {path}")]
    MissingFile { path: PathBuf },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed line {line} in {file}: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("pointer in {file} targets unknown synset {offset} ({class})")]
    DanglingPointer {
        file: String,
        offset: u64,
        class: PosClass,
    },
}

/// A relation pointer of a synset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pointer {
    pub symbol: String,
    pub target_offset: u64,
    pub target_class: PosClass,
    /// 1-based source word number within the owning synset; 0 = semantic
    /// (whole-synset) pointer.
    pub source: usize,
    /// 1-based target word number; 0 = whole synset.
    pub target: usize,
}

/// A synset record from a data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub offset: u64,
    pub words: Vec<String>,
    pub pointers: Vec<Pointer>,
}

/// Counts reported after a successful load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconStats {
    pub entries: usize,
    pub synsets: usize,
    pub exceptions: usize,
    pub overrides: usize,
}

/// Result of an antonym query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntonymResult {
    pub lemma: String,
    pub class: PosClass,
    /// Deduplicated, lowercase, underscores for multiword lemmas. Direct
    /// antonym pointers come first in sense order, then antonyms of other
    /// members of the same synsets.
    pub antonyms: Vec<String>,
}

/// An in-memory WordNet database.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<(PosClass, String), Vec<u64>>,
    synsets: BTreeMap<(PosClass, u64), Synset>,
    exceptions: BTreeMap<(PosClass, String), Vec<String>>,
    overrides: BTreeMap<String, Vec<String>>,
}

impl Lexicon {
    /// Loads `index.{noun,verb,adj,adv}`, `data.{noun,verb,adj,adv}` and
    /// `{noun,verb,adj,adv}.exc` from a WordNet dict directory.
    pub fn load(dir: &Path) -> Result<Lexicon, WordnetError> {
        let mut lexicon = Lexicon::default();
        for class in PosClass::ALL {
            let suffix = class.file_suffix();
            lexicon.load_index(&dir.join(format!("index.{suffix}")), class)?;
            lexicon.load_data(&dir.join(format!("data.{suffix}")), class)?;
            lexicon.load_exceptions(&dir.join(format!("{suffix}.exc")), class)?;
        }
        lexicon.validate()?;
        Ok(lexicon)
    }

    /// Adds antonym overrides from a two-column text (`lemma antonym`,
    /// `#` comments allowed). Later lines append to earlier ones.
    pub fn add_overrides(&mut self, text: &str) {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            if let (Some(lemma), Some(antonym)) = (fields.next(), fields.next()) {
                self.overrides
                    .entry(lemma.to_lowercase())
                    .or_default()
                    .push(antonym.to_lowercase());
            }
        }
    }

    pub fn stats(&self) -> LexiconStats {
        LexiconStats {
            entries: self.entries.len(),
            synsets: self.synsets.len(),
            exceptions: self.exceptions.len(),
            overrides: self.overrides.len(),
        }
    }

    pub fn contains(&self, lemma: &str, class: PosClass) -> bool {
        self.entries.contains_key(&(class, normalize(lemma)))
    }

    pub fn synset(&self, class: PosClass, offset: u64) -> Option<&Synset> {
        self.synsets.get(&(class, offset))
    }

    /// Morphological base forms of `surface` for one class: the surface
    /// itself when indexed, exception-file bases, then suffix-detachment
    /// candidates present in the index. Empty when nothing applies.
    pub fn morphy(&self, surface: &str, class: PosClass) -> Vec<String> {
        let form = normalize(surface);
        let mut results: Vec<String> = Vec::new();
        let push = |cand: String, results: &mut Vec<String>| {
            if !results.contains(&cand) {
                results.push(cand);
            }
        };
        if self.entries.contains_key(&(class, form.clone())) {
            push(form.clone(), &mut results);
        }
        if let Some(bases) = self.exceptions.get(&(class, form.clone())) {
            for b in bases {
                push(b.clone(), &mut results);
            }
        }
        for (suffix, replacement) in detachment_rules(class) {
            if form.len() > suffix.len() && form.ends_with(suffix) {
                let candidate = format!("{}{}", &form[..form.len() - suffix.len()], replacement);
                if self.entries.contains_key(&(class, candidate.clone())) {
                    push(candidate, &mut results);
                }
            }
        }
        results
    }

    /// Guesses the class of an untagged word by index-file priority
    /// (verb, noun, adjective, adverb), returning the class and base form
    /// of the first hit.
    pub fn guess(&self, surface: &str) -> Option<(PosClass, String)> {
        for class in PosClass::GUESS_ORDER {
            if let Some(base) = self.morphy(surface, class).into_iter().next() {
                return Some((class, base));
            }
        }
        None
    }

    /// Antonyms of `lemma` in `class`. The override table wins when it
    /// lists the lemma; otherwise direct `!` pointers of all senses in
    /// sense order, followed by antonyms of same-synset members.
    pub fn antonym(&self, lemma: &str, class: PosClass) -> AntonymResult {
        let lemma = normalize(lemma);
        if let Some(list) = self.overrides.get(&lemma) {
            let mut antonyms = Vec::new();
            for a in list {
                if !antonyms.contains(a) {
                    antonyms.push(a.clone());
                }
            }
            return AntonymResult {
                lemma,
                class,
                antonyms,
            };
        }

        let mut antonyms: Vec<String> = Vec::new();
        let Some(offsets) = self.entries.get(&(class, lemma.clone())) else {
            return AntonymResult {
                lemma,
                class,
                antonyms,
            };
        };
        // Direct pointers of the query word itself, then pointers of the
        // remaining synset members.
        for own_word in [true, false] {
            for offset in offsets {
                let Some(synset) = self.synsets.get(&(class, *offset)) else {
                    continue;
                };
                let word_num = synset
                    .words
                    .iter()
                    .position(|w| w.eq_ignore_ascii_case(&lemma))
                    .map(|p| p + 1)
                    .unwrap_or(0);
                for p in &synset.pointers {
                    if p.symbol != "!" {
                        continue;
                    }
                    let from_query = p.source == word_num || p.source == 0;
                    if from_query != own_word {
                        continue;
                    }
                    if let Some(target) = self.synsets.get(&(p.target_class, p.target_offset)) {
                        let word = match p.target {
                            0 => target.words.first(),
                            n => target.words.get(n - 1),
                        };
                        if let Some(w) = word {
                            let w = w.to_lowercase();
                            if !antonyms.contains(&w) {
                                antonyms.push(w);
                            }
                        }
                    }
                }
            }
        }
        AntonymResult {
            lemma,
            class,
            antonyms,
        }
    }

    fn load_index(&mut self, path: &Path, class: PosClass) -> Result<(), WordnetError> {
        let text = read(path)?;
        let file = file_name(path);
        for (number, line) in text.lines().enumerate() {
            let number = number + 1;
            if line.starts_with(' ') || line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |reason: &str| WordnetError::MalformedLine {
                file: file.clone(),
                line: number,
                reason: reason.to_string(),
            };
            if fields.len() < 6 {
                return Err(err("expected at least 6 fields"));
            }
            let lemma = fields[0].to_lowercase();
            let synset_cnt: usize = fields[2]
                .parse()
                .map_err(|_| err("synset_cnt is not a number"))?;
            let p_cnt: usize = fields[3]
                .parse()
                .map_err(|_| err("p_cnt is not a number"))?;
            let offsets_start = 4 + p_cnt + 2;
            if fields.len() < offsets_start + synset_cnt {
                return Err(err("truncated line: fewer synset offsets than synset_cnt"));
            }
            let mut offsets = Vec::with_capacity(synset_cnt);
            for field in &fields[offsets_start..offsets_start + synset_cnt] {
                offsets.push(
                    field
                        .parse()
                        .map_err(|_| err("synset offset is not a number"))?,
                );
            }
            self.entries.insert((class, lemma), offsets);
        }
        Ok(())
    }

    fn load_data(&mut self, path: &Path, class: PosClass) -> Result<(), WordnetError> {
        let text = read(path)?;
        let file = file_name(path);
        for (number, line) in text.lines().enumerate() {
            let number = number + 1;
            if line.starts_with(' ') || line.is_empty() {
                continue;
            }
            let data_part = line.split('|').next().unwrap_or(line);
            let fields: Vec<&str> = data_part.split_whitespace().collect();
            let err = |reason: String| WordnetError::MalformedLine {
                file: file.clone(),
                line: number,
                reason,
            };
            let mut cursor = fields.iter();
            let mut next = |what: &str| {
                cursor
                    .next()
                    .copied()
                    .ok_or_else(|| err(format!("truncated line: missing {what}")))
            };

            let offset: u64 = next("synset offset")?
                .parse()
                .map_err(|_| err("synset offset is not a number".into()))?;
            next("lex_filenum")?;
            let marker = next("ss_type")?;
            let ss_class = marker
                .chars()
                .next()
                .and_then(PosClass::from_marker)
                .ok_or_else(|| err(format!("unknown ss_type {marker}")))?;
            if ss_class != class {
                return Err(err(format!(
                    "ss_type {marker} does not match file class {class}"
                )));
            }
            let w_cnt = usize::from_str_radix(next("w_cnt")?, 16)
                .map_err(|_| err("w_cnt is not a hex number".into()))?;
            let mut words = Vec::with_capacity(w_cnt);
            for _ in 0..w_cnt {
                // Adjective word forms may carry a syntax marker suffix
                // such as good(p); the lemma is the part before it.
                let word = next("word")?;
                let word = match word.find('(') {
                    Some(pos) if word.ends_with(')') => &word[..pos],
                    _ => word,
                };
                words.push(word.to_string());
                next("lex_id")?;
            }
            let p_cnt: usize = next("p_cnt")?
                .parse()
                .map_err(|_| err("p_cnt is not a number".into()))?;
            let mut pointers = Vec::with_capacity(p_cnt);
            for _ in 0..p_cnt {
                let symbol = next("pointer symbol")?.to_string();
                let target_offset: u64 = next("pointer offset")?
                    .parse()
                    .map_err(|_| err("pointer offset is not a number".into()))?;
                let pos = next("pointer pos")?;
                let target_class = pos
                    .chars()
                    .next()
                    .and_then(PosClass::from_marker)
                    .ok_or_else(|| err(format!("unknown pointer pos {pos}")))?;
                let source_target = next("source/target")?;
                if source_target.len() != 4 {
                    return Err(err(format!(
                        "source/target field {source_target} is not 4 hex digits"
                    )));
                }
                let source = usize::from_str_radix(&source_target[..2], 16)
                    .map_err(|_| err("source word number is not hex".into()))?;
                let target = usize::from_str_radix(&source_target[2..], 16)
                    .map_err(|_| err("target word number is not hex".into()))?;
                pointers.push(Pointer {
                    symbol,
                    target_offset,
                    target_class,
                    source,
                    target,
                });
            }
            // Verb data lines append a frame section; it is not modeled.
            self.synsets.insert(
                (class, offset),
                Synset {
                    offset,
                    words,
                    pointers,
                },
            );
        }
        Ok(())
    }

    fn load_exceptions(&mut self, path: &Path, class: PosClass) -> Result<(), WordnetError> {
        let text = read(path)?;
        let file = file_name(path);
        for (number, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let inflected = fields.next().ok_or_else(|| WordnetError::MalformedLine {
                file: file.clone(),
                line: number + 1,
                reason: "empty exception line".to_string(),
            })?;
            let bases: Vec<String> = fields.map(|f| f.to_lowercase()).collect();
            if bases.is_empty() {
                return Err(WordnetError::MalformedLine {
                    file: file.clone(),
                    line: number + 1,
                    reason: "exception line has no base form".to_string(),
                });
            }
            self.exceptions
                .insert((class, inflected.to_lowercase()), bases);
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), WordnetError> {
        for ((class, _), synset) in &self.synsets {
            for p in &synset.pointers {
                if !self
                    .synsets
                    .contains_key(&(p.target_class, p.target_offset))
                {
                    return Err(WordnetError::DanglingPointer {
                        file: format!("data.{}", class.file_suffix()),
                        offset: p.target_offset,
                        class: p.target_class,
                    });
                }
            }
        }
        Ok(())
    }
}

fn normalize(word: &str) -> String {
    word.to_lowercase().replace(' ', "_")
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn read(path: &Path) -> Result<String, WordnetError> {
    if !path.is_file() {
        return Err(WordnetError::MissingFile {
            path: path.to_path_buf(),
        });
    }
    fs::read_to_string(path).map_err(|source| WordnetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Suffix detachment rules per class, applied in order.
fn detachment_rules(class: PosClass) -> &'static [(&'static str, &'static str)] {
    match class {
        PosClass::Noun => &[
            ("s", ""),
            ("ses", "s"),
            ("xes", "x"),
            ("zes", "z"),
            ("ches", "ch"),
            ("shes", "sh"),
            ("men", "man"),
            ("ies", "y"),
        ],
        PosClass::Verb => &[
            ("s", ""),
            ("ies", "y"),
            ("es", "e"),
            ("es", ""),
            ("ed", "e"),
            ("ed", ""),
            ("ing", "e"),
            ("ing", ""),
        ],
        PosClass::Adjective => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
        PosClass::Adverb => &[],
    }
}
