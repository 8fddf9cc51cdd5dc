//! Measure-B scoring of predicted negati and report rendering.
//!
//! Precision is the number of true positives divided by the total number
//! of predictions; recall divides by the number of gold negati. A
//! prediction is a true positive iff its lemma set equals the gold lemma
//! set exactly (multi-word gold requires the full set). In unfiltered
//! mode a prediction against an empty gold counts as a false prediction;
//! in filtered mode such cases are excluded.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::align::{self, TreatConfig};
use crate::corpus::{CorpusSentence, TaskRecord};
use crate::textprep::{StopwordList, TaskText};
use crate::wordnet::Lexicon;

/// A case id paired with its (possibly empty) negatus lemma set.
pub type CaseSet = Vec<(String, BTreeSet<String>)>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("prediction/gold task ids do not align one-to-one: {0}")]
    IdMismatch(String),
}

/// Scores of one strategy on one split.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRun {
    pub strategy: String,
    pub split: String,
    pub true_positives: usize,
    /// Prediction count (the precision denominator; excludes gold-empty
    /// cases in filtered mode).
    pub predictions: usize,
    /// Number of cases with a gold negatus (the recall denominator).
    pub gold_count: usize,
}

impl ScoredRun {
    /// Precision in percent; 0 when there are no predictions.
    pub fn precision(&self) -> f64 {
        ratio(self.true_positives, self.predictions)
    }

    /// Recall in percent; 0 when there is no gold.
    pub fn recall(&self) -> f64 {
        ratio(self.true_positives, self.gold_count)
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        100.0 * numerator as f64 / denominator as f64
    }
}

/// Rounds half-up to two decimals, for reports.
pub fn round2(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Normalizes a lemma set for comparison.
fn normalize(set: &BTreeSet<String>) -> BTreeSet<String> {
    set.iter().map(|s| s.to_lowercase()).collect()
}

/// Scores predictions against gold annotations under measure B. Both
/// lists pair a case id with a (possibly empty) negatus lemma set; the
/// ids must align one-to-one, in any order.
pub fn score(
    strategy: &str,
    split: &str,
    predictions: &[(String, BTreeSet<String>)],
    gold: &[(String, BTreeSet<String>)],
    filtered: bool,
) -> Result<ScoredRun, EvalError> {
    let mut gold_map: BTreeMap<&str, &BTreeSet<String>> = BTreeMap::new();
    for (id, set) in gold {
        if gold_map.insert(id, set).is_some() {
            return Err(EvalError::IdMismatch(format!("duplicate gold id {id}")));
        }
    }
    if predictions.len() != gold.len() {
        return Err(EvalError::IdMismatch(format!(
            "{} predictions vs {} gold cases",
            predictions.len(),
            gold.len()
        )));
    }

    let mut run = ScoredRun {
        strategy: strategy.to_string(),
        split: split.to_string(),
        true_positives: 0,
        predictions: 0,
        gold_count: 0,
    };
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (id, predicted) in predictions {
        let Some(gold_set) = gold_map.get(id.as_str()) else {
            return Err(EvalError::IdMismatch(format!(
                "prediction id {id} has no gold case"
            )));
        };
        if !seen.insert(id) {
            return Err(EvalError::IdMismatch(format!(
                "duplicate prediction id {id}"
            )));
        }
        let predicted = normalize(predicted);
        let gold_set = normalize(gold_set);
        if !gold_set.is_empty() {
            run.gold_count += 1;
        }
        if !predicted.is_empty() {
            if gold_set.is_empty() {
                // A found negatus where the gold specifies none: a false
                // prediction, unless filtered mode excludes the case.
                if !filtered {
                    run.predictions += 1;
                }
            } else {
                run.predictions += 1;
                if predicted == gold_set {
                    run.true_positives += 1;
                }
            }
        }
    }
    Ok(run)
}

/// Builds scoring cases from self-contained task records (gold negatus
/// lemmas in the task file): one case per task, the prediction being the
/// set of negatus lemmas the pipeline found.
pub fn task_cases(
    tasks: &[TaskRecord],
    config: &TreatConfig,
    lexicon: Option<&Lexicon>,
    stopwords: &StopwordList,
) -> (CaseSet, CaseSet) {
    let mut predictions = Vec::new();
    let mut gold = Vec::new();
    for record in tasks {
        let text = TaskText::from_raw(&record.text, stopwords, lexicon);
        let result = align::treat(&text, &record.formula, config, lexicon);
        predictions.push((record.id.clone(), result.negatus_lemmas()));
        let gold_set: BTreeSet<String> = record
            .gold
            .iter()
            .flatten()
            .map(|g| g.to_lowercase())
            .collect();
        gold.push((record.id.clone(), gold_set));
    }
    (predictions, gold)
}

/// Builds scoring cases from a CD-SCO corpus joined with a task file that
/// supplies formulas keyed by `chapter_sentence` ids.
///
/// Every gold negation becomes one case (`key#n`); a predicted assignment
/// is matched to it when its cue tokens overlap the gold cue tokens.
/// Predicted assignments without a gold counterpart become extra cases
/// with an empty gold set (`key#p<cue>`). Sentences carrying gold
/// negations but lacking a formula are reported as join failures and
/// score as empty predictions.
pub fn cdsco_cases(
    sentences: &[CorpusSentence],
    tasks: &[TaskRecord],
    config: &TreatConfig,
    lexicon: Option<&Lexicon>,
    stopwords: &StopwordList,
) -> (CaseSet, CaseSet, Vec<String>) {
    let by_key: BTreeMap<&str, &TaskRecord> = tasks.iter().map(|t| (t.id.as_str(), t)).collect();
    let mut predictions = Vec::new();
    let mut gold = Vec::new();
    let mut join_failures = Vec::new();

    for sentence in sentences {
        let key = sentence.key();
        let record = by_key.get(key.as_str());
        if record.is_none() && !sentence.gold_negations.is_empty() {
            join_failures.push(key.clone());
        }
        let result = record.map(|r| {
            let text =
                TaskText::from_tokens(sentence.text(), sentence.pipeline_tokens(), stopwords);
            align::treat(&text, &r.formula, config, lexicon)
        });

        let mut used: BTreeSet<usize> = BTreeSet::new();
        for (n, gold_negation) in sentence.gold_negations.iter().enumerate() {
            let case_id = format!("{key}#{}", n + 1);
            let gold_set = sentence.event_lemmas(gold_negation);
            let mut predicted = BTreeSet::new();
            if let Some(result) = &result {
                let gold_cues: BTreeSet<usize> =
                    gold_negation.cue.iter().map(|(i, _)| *i).collect();
                for (ai, assignment) in result.assignments.iter().enumerate() {
                    if used.contains(&ai) {
                        continue;
                    }
                    let cue = result
                        .cues
                        .iter()
                        .find(|c| c.cue_id == assignment.cue_id)
                        .expect("assignments reference detected cues");
                    if cue.token_indices.iter().any(|i| gold_cues.contains(i)) {
                        if let Some(negatus) = result.negatus_for_cue(assignment.cue_id) {
                            predicted.insert(negatus.lemma.clone());
                        }
                        used.insert(ai);
                        break;
                    }
                }
            }
            predictions.push((case_id.clone(), predicted));
            gold.push((case_id, gold_set));
        }

        if let Some(result) = &result {
            for (ai, assignment) in result.assignments.iter().enumerate() {
                if used.contains(&ai) {
                    continue;
                }
                let Some(negatus) = result.negatus_for_cue(assignment.cue_id) else {
                    continue;
                };
                let case_id = format!("{key}#p{}", assignment.cue_id);
                predictions.push((case_id.clone(), BTreeSet::from([negatus.lemma.clone()])));
                gold.push((case_id, BTreeSet::new()));
            }
        }
    }
    (predictions, gold, join_failures)
}

/// Renders runs as comma-separated values with a fixed header.
pub fn report_csv(runs: &[ScoredRun]) -> String {
    let mut out = String::from("strategy,split,tp,pred,gold,precision,recall,f1\n");
    for r in runs {
        out.push_str(&format!(
            "{},{},{},{},{},{:.2},{:.2},{:.2}\n",
            r.strategy,
            r.split,
            r.true_positives,
            r.predictions,
            r.gold_count,
            round2(r.precision()),
            round2(r.recall()),
            round2(r.f1()),
        ));
    }
    out
}

/// Renders an aligned plain-text table: strategies as rows, splits as
/// column groups of precision/recall/F1.
pub fn report_table(runs: &[ScoredRun]) -> String {
    let mut splits: Vec<&str> = Vec::new();
    let mut strategies: Vec<&str> = Vec::new();
    for r in runs {
        if !splits.contains(&r.split.as_str()) {
            splits.push(&r.split);
        }
        if !strategies.contains(&r.strategy.as_str()) {
            strategies.push(&r.strategy);
        }
    }

    let strategy_width = strategies
        .iter()
        .map(|s| s.len())
        .chain(["strategy".len()])
        .max()
        .unwrap_or(8)
        .max(8);
    let mut lines: Vec<String> = Vec::new();
    let mut header = format!("{:<strategy_width$}", "strategy");
    let mut subheader = format!("{:<strategy_width$}", "");
    for split in &splits {
        header.push_str(&format!("  {:<24}", split));
        subheader.push_str(&format!("  {:>6} {:>6} {:>6}   ", "prec", "rec", "f1"));
    }
    lines.push(header);
    lines.push(subheader);

    for strategy in &strategies {
        let mut row = format!("{strategy:<strategy_width$}");
        for split in &splits {
            match runs
                .iter()
                .find(|r| r.strategy == *strategy && r.split == *split)
            {
                Some(r) => row.push_str(&format!(
                    "  {:>6.2} {:>6.2} {:>6.2}   ",
                    round2(r.precision()),
                    round2(r.recall()),
                    round2(r.f1())
                )),
                None => row.push_str(&format!("  {:>6} {:>6} {:>6}   ", "-", "-", "-")),
            }
        }
        lines.push(row);
    }
    let mut out = String::new();
    for line in lines {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(id: &str, lemmas: &[&str]) -> (String, BTreeSet<String>) {
        (
            id.to_string(),
            lemmas.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn measure_b_arithmetic() {
        // 2 predictions, 1 correct, 4 gold negati.
        let predictions = vec![
            case("t1", &["good"]),
            case("t2", &["wrong"]),
            case("t3", &[]),
            case("t4", &[]),
        ];
        let gold = vec![
            case("t1", &["good"]),
            case("t2", &["stop"]),
            case("t3", &["like"]),
            case("t4", &["can"]),
        ];
        let run = score("comb", "test", &predictions, &gold, false).unwrap();
        assert_eq!(run.true_positives, 1);
        assert_eq!(run.predictions, 2);
        assert_eq!(run.gold_count, 4);
        assert_eq!(round2(run.precision()), 50.00);
        assert_eq!(round2(run.recall()), 25.00);
        assert_eq!(round2(run.f1()), 33.33);
    }

    #[test]
    fn zero_predictions_degenerate_to_zero_scores() {
        let predictions = vec![case("t1", &[])];
        let gold = vec![case("t1", &["good"])];
        let run = score("fns", "dev", &predictions, &gold, false).unwrap();
        assert_eq!(run.precision(), 0.0);
        assert_eq!(run.recall(), 0.0);
        assert_eq!(run.f1(), 0.0);
    }

    #[test]
    fn gold_empty_prediction_counts_as_false_unless_filtered() {
        let predictions = vec![case("t1", &["stop"]), case("t2", &["good"])];
        let gold = vec![case("t1", &[]), case("t2", &["good"])];

        let unfiltered = score("comb", "train", &predictions, &gold, false).unwrap();
        assert_eq!(unfiltered.predictions, 2);
        assert_eq!(unfiltered.true_positives, 1);
        assert_eq!(round2(unfiltered.precision()), 50.00);

        let filtered = score("comb", "train", &predictions, &gold, true).unwrap();
        assert_eq!(filtered.predictions, 1);
        assert_eq!(filtered.true_positives, 1);
        assert_eq!(round2(filtered.precision()), 100.00);
        // Excluding gold-empty cases can only raise precision.
        assert!(filtered.precision() >= unfiltered.precision());
        // Recall is unaffected by filtering.
        assert_eq!(filtered.recall(), unfiltered.recall());
    }

    #[test]
    fn multiword_gold_requires_full_match() {
        let predictions = vec![case("t1", &["served"])];
        let gold = vec![case("t1", &["served", "cooked"])];
        let run = score("comb", "train", &predictions, &gold, false).unwrap();
        assert_eq!(run.true_positives, 0);
        assert_eq!(run.predictions, 1);
    }

    #[test]
    fn id_mismatch_is_an_error() {
        let predictions = vec![case("t1", &["good"])];
        let gold = vec![case("t2", &["good"])];
        assert!(score("comb", "x", &predictions, &gold, false).is_err());

        let duplicated = vec![case("t1", &["good"]), case("t1", &["good"])];
        let gold = vec![case("t1", &["good"]), case("t2", &["good"])];
        assert!(score("comb", "x", &duplicated, &gold, false).is_err());

        let predictions = vec![case("t1", &["good"])];
        let short_gold = vec![];
        assert!(score("comb", "x", &predictions, &short_gold, false).is_err());
    }

    #[test]
    fn score_is_permutation_invariant() {
        let predictions = vec![case("a", &["x"]), case("b", &["y"]), case("c", &[])];
        let gold = vec![case("b", &["y"]), case("c", &["z"]), case("a", &["w"])];
        let forward = score("s", "t", &predictions, &gold, false).unwrap();
        let mut shuffled = predictions.clone();
        shuffled.reverse();
        let backward = score("s", "t", &shuffled, &gold, false).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn f1_between_min_and_max_of_p_and_r() {
        let predictions = vec![case("a", &["x"]), case("b", &["bad"]), case("c", &["z"])];
        let gold = vec![case("a", &["x"]), case("b", &["y"]), case("c", &["z"])];
        let run = score("s", "t", &predictions, &gold, false).unwrap();
        let (p, r, f1) = (run.precision(), run.recall(), run.f1());
        assert!(p > 0.0 && r > 0.0);
        assert!(f1 >= p.min(r) && f1 <= p.max(r));
    }

    #[test]
    fn csv_report_shape() {
        let run = ScoredRun {
            strategy: "comb".into(),
            split: "test".into(),
            true_positives: 1,
            predictions: 2,
            gold_count: 4,
        };
        let csv = report_csv(&[run]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("strategy,split,tp,pred,gold,precision,recall,f1")
        );
        assert_eq!(lines.next(), Some("comb,test,1,2,4,50.00,25.00,33.33"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn table_covers_all_strategy_split_cells() {
        let mut runs = Vec::new();
        for strategy in ["baseline", "fns", "fv", "fv-fns", "comb"] {
            for split in ["train", "dev", "test"] {
                runs.push(ScoredRun {
                    strategy: strategy.into(),
                    split: split.into(),
                    true_positives: 1,
                    predictions: 2,
                    gold_count: 2,
                });
            }
        }
        let table = report_table(&runs);
        let data_rows: Vec<&str> = table.lines().skip(2).collect();
        assert_eq!(data_rows.len(), 5);
        for row in data_rows {
            let numbers = row.split_whitespace().count();
            assert_eq!(numbers, 1 + 9, "row has 9 values: {row}");
        }
    }

    #[test]
    fn empty_input_renders_header_only() {
        let table = report_table(&[]);
        assert_eq!(table.lines().count(), 2);
        let csv = report_csv(&[]);
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round2(33.333333), 33.33);
        assert_eq!(round2(33.335), 33.34);
        assert_eq!(round2(0.005), 0.01);
    }
}
