//! Corpus I/O: CD-SCO CoNLL-style negation corpora, JSON-lines task
//! files pairing sentences with formulas, and prediction files.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::TreatmentResult;
use crate::fol::{self, Formula};
use crate::textprep::Token;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected 7 annotation columns plus '***' or negation column triples, found {found} columns")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: {column} is not an integer: {value}")]
    BadInteger {
        line: usize,
        column: &'static str,
        value: String,
    },
    #[error("line {line}: column count differs from the sentence's first row")]
    InconsistentColumns { line: usize },
}

/// One token row of a CD-SCO sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusToken {
    pub word: String,
    pub lemma: String,
    pub pos: String,
    /// Syntax-tree bit column; stored, unused.
    pub parse: String,
}

/// A gold negation annotation: cue tokens (with the annotated substring,
/// which differs from the word for affixal cues), scope token indices,
/// and negated-event tokens. The event list may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoldNegation {
    pub cue: Vec<(usize, String)>,
    pub scope: Vec<usize>,
    pub event: Vec<(usize, String)>,
}

impl GoldNegation {
    pub fn has_negatus(&self) -> bool {
        !self.event.is_empty()
    }
}

/// A sentence block of a CD-SCO file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSentence {
    pub chapter: String,
    pub sentence: usize,
    pub tokens: Vec<CorpusToken>,
    pub gold_negations: Vec<GoldNegation>,
}

impl CorpusSentence {
    /// Key joining corpus sentences with task records: `chapter_sentence`.
    pub fn key(&self) -> String {
        format!("{}_{}", self.chapter, self.sentence)
    }

    pub fn text(&self) -> String {
        let words: Vec<&str> = self.tokens.iter().map(|t| t.word.as_str()).collect();
        words.join(" ")
    }

    /// Tokens for the preprocessing pipeline, carrying the gold lemma and
    /// POS columns.
    pub fn pipeline_tokens(&self) -> Vec<Token> {
        self.tokens
            .iter()
            .enumerate()
            .map(|(index, t)| Token {
                index,
                surface: t.word.clone(),
                lemma: if t.lemma == "_" || t.lemma.is_empty() {
                    t.word.to_lowercase()
                } else {
                    t.lemma.to_lowercase()
                },
                pos: t.pos.clone(),
                is_stopword: false,
                is_cue_part: false,
            })
            .collect()
    }

    /// Gold negatus lemma set of one negation, using the lemma column.
    pub fn event_lemmas(&self, negation: &GoldNegation) -> BTreeSet<String> {
        negation
            .event
            .iter()
            .map(|(idx, word)| match self.tokens.get(*idx) {
                Some(t) if t.lemma != "_" && !t.lemma.is_empty() => t.lemma.to_lowercase(),
                _ => word.to_lowercase(),
            })
            .collect()
    }
}

/// Aggregate counts over a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusStats {
    pub sentences: usize,
    /// Gold negation instances.
    pub negations: usize,
    /// Gold negations with a specified negatus (nonempty event).
    pub with_negatus: usize,
    /// Sentences with at least one gold negation.
    pub sentences_with_negation: usize,
}

pub fn corpus_stats(sentences: &[CorpusSentence]) -> CorpusStats {
    let negations = sentences.iter().map(|s| s.gold_negations.len()).sum();
    let with_negatus = sentences
        .iter()
        .flat_map(|s| &s.gold_negations)
        .filter(|n| n.has_negatus())
        .count();
    let sentences_with_negation =
        sentences.iter().filter(|s| !s.gold_negations.is_empty()).count();
    CorpusStats {
        sentences: sentences.len(),
        negations,
        with_negatus,
        sentences_with_negation,
    }
}

/// Reads a CD-SCO file: blank-line-separated sentence blocks, each row
/// `chapter sentence# token# word lemma pos parse` followed by either a
/// single `***` column (no negation) or three columns per negation
/// (cue, scope, event; `_` when inactive). Tab- or whitespace-separated.
pub fn read_cdsco(path: &Path) -> Result<Vec<CorpusSentence>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_cdsco(&text)
}

pub fn parse_cdsco(text: &str) -> Result<Vec<CorpusSentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut block: Vec<(usize, Vec<String>)> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let number = number + 1;
        if line.trim().is_empty() {
            if !block.is_empty() {
                sentences.push(parse_block(&block)?);
                block.clear();
            }
            continue;
        }
        let fields: Vec<String> = if line.contains('\t') {
            line.split('\t').map(|f| f.trim().to_string()).collect()
        } else {
            line.split_whitespace().map(str::to_string).collect()
        };
        block.push((number, fields));
    }
    if !block.is_empty() {
        sentences.push(parse_block(&block)?);
    }
    Ok(sentences)
}

fn parse_block(rows: &[(usize, Vec<String>)]) -> Result<CorpusSentence, CorpusError> {
    let (first_line, first) = &rows[0];
    let columns = first.len();
    let negations = match columns {
        n if n < 8 => {
            return Err(CorpusError::ColumnCount {
                line: *first_line,
                found: columns,
            })
        }
        8 if first[7] == "***" => 0,
        n if (n - 7) % 3 == 0 => (n - 7) / 3,
        _ => {
            return Err(CorpusError::ColumnCount {
                line: *first_line,
                found: columns,
            })
        }
    };

    let chapter = first[0].clone();
    let sentence: usize = first[1].parse().map_err(|_| CorpusError::BadInteger {
        line: *first_line,
        column: "sentence number",
        value: first[1].clone(),
    })?;

    let mut tokens = Vec::with_capacity(rows.len());
    let mut gold: Vec<GoldNegation> = vec![GoldNegation::default(); negations];
    for (line, fields) in rows {
        if fields.len() != columns {
            return Err(CorpusError::InconsistentColumns { line: *line });
        }
        let index: usize = fields[2].parse().map_err(|_| CorpusError::BadInteger {
            line: *line,
            column: "token number",
            value: fields[2].clone(),
        })?;
        tokens.push(CorpusToken {
            word: fields[3].clone(),
            lemma: fields[4].clone(),
            pos: fields[5].clone(),
            parse: fields[6].clone(),
        });
        for (slot, negation) in gold.iter_mut().enumerate() {
            let base = 7 + slot * 3;
            if fields[base] != "_" {
                negation.cue.push((index, fields[base].clone()));
            }
            if fields[base + 1] != "_" {
                negation.scope.push(index);
            }
            if fields[base + 2] != "_" {
                negation.event.push((index, fields[base + 2].clone()));
            }
        }
    }
    Ok(CorpusSentence {
        chapter,
        sentence,
        tokens,
        gold_negations: gold,
    })
}

/// Renders sentences back into the CD-SCO column format (tab-separated).
/// Reading the result reproduces all modeled fields.
pub fn write_cdsco(sentences: &[CorpusSentence]) -> String {
    let mut out = String::new();
    for (si, s) in sentences.iter().enumerate() {
        if si > 0 {
            out.push('\n');
        }
        for (index, token) in s.tokens.iter().enumerate() {
            let mut fields = vec![
                s.chapter.clone(),
                s.sentence.to_string(),
                index.to_string(),
                token.word.clone(),
                token.lemma.clone(),
                token.pos.clone(),
                token.parse.clone(),
            ];
            if s.gold_negations.is_empty() {
                fields.push("***".to_string());
            } else {
                for negation in &s.gold_negations {
                    let cue = negation.cue.iter().find(|(i, _)| *i == index);
                    let scope = negation.scope.contains(&index);
                    let event = negation.event.iter().find(|(i, _)| *i == index);
                    fields.push(
                        cue.map(|(_, w)| w.clone())
                            .unwrap_or_else(|| "_".to_string()),
                    );
                    fields.push(if scope {
                        token.word.clone()
                    } else {
                        "_".to_string()
                    });
                    fields.push(
                        event
                            .map(|(_, w)| w.clone())
                            .unwrap_or_else(|| "_".to_string()),
                    );
                }
            }
            out.push_str(&fields.join("\t"));
            out.push('\n');
        }
    }
    out
}

/// A sentence/formula pair read from a task file.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskRecord {
    pub id: String,
    pub text: String,
    pub formula_text: String,
    pub formula: Formula,
    pub gold: Option<Vec<String>>,
}

/// A record that failed to load, with its line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskFailure {
    pub line: usize,
    pub message: String,
}

/// Result of reading a task file: parsed records plus per-record
/// failures. A failing record never affects its neighbors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TaskFile {
    pub records: Vec<TaskRecord>,
    pub failures: Vec<TaskFailure>,
}

#[derive(Deserialize)]
struct RawTask {
    id: String,
    text: String,
    formula: String,
    #[serde(default)]
    gold: Option<Vec<String>>,
}

/// Reads a JSON-lines task file (`{id, text, formula, gold?}` per line),
/// parsing each formula eagerly.
pub fn read_tasks(path: &Path) -> Result<TaskFile, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_tasks(&text))
}

pub fn parse_tasks(text: &str) -> TaskFile {
    let mut file = TaskFile::default();
    for (number, line) in text.lines().enumerate() {
        let number = number + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawTask = match serde_json::from_str(line) {
            Ok(raw) => raw,
            Err(e) => {
                file.failures.push(TaskFailure {
                    line: number,
                    message: e.to_string(),
                });
                continue;
            }
        };
        match fol::parse_formula(&raw.formula) {
            Ok(formula) => file.records.push(TaskRecord {
                id: raw.id,
                text: raw.text,
                formula_text: raw.formula,
                formula,
                gold: raw.gold,
            }),
            Err(e) => file.failures.push(TaskFailure {
                line: number,
                message: format!("formula for task {}: {e}", raw.id),
            }),
        }
    }
    file
}

/// One line of a prediction file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub assignments: Vec<PredictionAssignment>,
    /// Negatus lemma per assignment; `null` when no rule produced one.
    pub negatus: Vec<Option<String>>,
    /// Inverse (antonym) per assignment, when a substitution happened.
    pub inverse: Vec<Option<String>>,
    /// Rewritten formula, canonical text.
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionAssignment {
    pub cue: usize,
    pub site: usize,
    pub overlap: Vec<String>,
}

impl PredictionRecord {
    pub fn from_result(id: &str, result: &TreatmentResult) -> PredictionRecord {
        let mut assignments = Vec::new();
        let mut negatus = Vec::new();
        let mut inverse = Vec::new();
        for a in &result.assignments {
            assignments.push(PredictionAssignment {
                cue: a.cue_id,
                site: a.site_id,
                overlap: a.overlap.iter().cloned().collect(),
            });
            let n = result.negatus_for_cue(a.cue_id);
            negatus.push(n.map(|n| n.lemma.clone()));
            inverse.push(n.and_then(|n| n.inverse.clone()));
        }
        PredictionRecord {
            id: id.to_string(),
            assignments,
            negatus,
            inverse,
            formula: fol::print_formula(&result.rewritten),
        }
    }
}

/// Serializes prediction records as JSON lines, ordered by task id.
pub fn predictions_to_string(records: &[PredictionRecord]) -> String {
    let mut sorted: Vec<&PredictionRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    for r in sorted {
        out.push_str(&serde_json::to_string(r).expect("prediction records serialize"));
        out.push('\n');
    }
    out
}

/// Writes prediction records to a file, ordered by task id.
pub fn write_predictions(records: &[PredictionRecord], path: &Path) -> Result<(), CorpusError> {
    fs::write(path, predictions_to_string(records)).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a prediction file back.
pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut out = Vec::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(line).map_err(|e| CorpusError::Io {
            path: format!("line {}", number + 1),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        })?;
        out.push(record);
    }
    Ok(out)
}
