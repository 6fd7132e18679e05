//! Scoring model verdicts against ground truth, plus corpus statistics.

mod report;

pub use report::{emit_report, format_pct, ReportFormat};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::norms::{Binary, NormCategory, NormKind};
use crate::story::Story;

pub type LabelKey = (String, u8);

/// Binary labels per (story, norm) from k annotators. The oracle's output
/// is the degenerate k=1 case, so oracle judgements and imported human
/// annotations flow through the same type.
#[derive(Debug, Clone, Default)]
pub struct AnnotationSet {
    pub labels: BTreeMap<LabelKey, Vec<Binary>>,
}

impl AnnotationSet {
    pub fn insert(&mut self, story_id: impl Into<String>, norm_id: u8, label: Binary) {
        self.labels
            .entry((story_id.into(), norm_id))
            .or_default()
            .push(label);
    }

    /// Equal annotator count across keys, or an error.
    pub fn annotator_count(&self) -> Result<usize, CoreError> {
        let mut counts: BTreeSet<usize> = BTreeSet::new();
        for labels in self.labels.values() {
            counts.insert(labels.len());
        }
        match counts.len() {
            0 => Ok(0),
            1 => Ok(counts.into_iter().next().unwrap()),
            _ => Err(CoreError::InvalidAnnotations(format!(
                "unequal annotator counts per key: {counts:?}"
            ))),
        }
    }
}

/// Per key, the label held by a strict majority of annotators. An even
/// count that splits in half is a rejection naming the key.
pub fn majority_vote(annotations: &AnnotationSet) -> Result<BTreeMap<LabelKey, Binary>, CoreError> {
    annotations.annotator_count()?;
    let mut out = BTreeMap::new();
    for ((story_id, norm_id), labels) in &annotations.labels {
        let yes = labels.iter().filter(|l| **l == Binary::Yes).count();
        let no = labels.len() - yes;
        let winner = match yes.cmp(&no) {
            std::cmp::Ordering::Greater => Binary::Yes,
            std::cmp::Ordering::Less => Binary::No,
            std::cmp::Ordering::Equal => {
                return Err(CoreError::TiedVote {
                    story_id: story_id.clone(),
                    norm_id: *norm_id,
                })
            }
        };
        out.insert((story_id.clone(), *norm_id), winner);
    }
    Ok(out)
}

/// A model's binary answer for one (story, norm) pair; the minimal view of
/// a verdict record that scoring needs.
#[derive(Debug, Clone, Deserialize)]
pub struct ScoredLabel {
    pub story_id: String,
    pub norm_id: u8,
    pub binary: Binary,
}

/// Counts over all (story, norm) pairs: ground truth rows, model columns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub truth_yes_model_yes: u64,
    pub truth_yes_model_no: u64,
    pub truth_no_model_yes: u64,
    pub truth_no_model_no: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.truth_yes_model_yes
            + self.truth_yes_model_no
            + self.truth_no_model_yes
            + self.truth_no_model_no
    }

    pub fn diagonal(&self) -> u64 {
        self.truth_yes_model_yes + self.truth_no_model_no
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreReport {
    pub model_name: String,
    pub n_stories: usize,
    /// Percentages; formatting (2 decimals in cells, 1 in averages) happens
    /// at emission time.
    pub per_norm_accuracy: BTreeMap<u8, f64>,
    pub overall_average: f64,
    pub category_accuracy: BTreeMap<NormCategory, f64>,
    pub kind_accuracy: BTreeMap<NormKind, f64>,
    pub confusion: Confusion,
}

pub const PROHIBITION_NORMS: [u8; 5] = [1, 6, 7, 8, 10];
pub const OBLIGATION_NORMS: [u8; 5] = [2, 3, 4, 5, 9];
pub const GENERIC_NORMS: [u8; 6] = [1, 2, 3, 4, 5, 6];
pub const ROLE_BASED_NORMS: [u8; 4] = [7, 8, 9, 10];

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let collected: Vec<f64> = values.collect();
    collected.iter().sum::<f64>() / collected.len() as f64
}

/// Scores model records against ground truth. The truth must form a
/// complete (story × norms 1–10) grid and the model records must cover
/// exactly the truth's keys.
pub fn score(
    truth: &BTreeMap<LabelKey, Binary>,
    model_records: &[ScoredLabel],
    model_name: &str,
) -> Result<ScoreReport, CoreError> {
    let mut model: BTreeMap<LabelKey, Binary> = BTreeMap::new();
    for record in model_records {
        let key = (record.story_id.clone(), record.norm_id);
        if model.insert(key.clone(), record.binary).is_some() {
            return Err(CoreError::KeyMismatch(format!(
                "duplicate model record for {key:?}"
            )));
        }
    }

    let missing: Vec<&LabelKey> = truth.keys().filter(|k| !model.contains_key(*k)).collect();
    if !missing.is_empty() {
        let shown: Vec<String> = missing.iter().take(10).map(|k| format!("{k:?}")).collect();
        return Err(CoreError::KeyMismatch(format!(
            "{} keys missing from model records, first {}: {}",
            missing.len(),
            shown.len(),
            shown.join(", ")
        )));
    }
    let extra: Vec<&LabelKey> = model.keys().filter(|k| !truth.contains_key(*k)).collect();
    if !extra.is_empty() {
        let shown: Vec<String> = extra.iter().take(10).map(|k| format!("{k:?}")).collect();
        return Err(CoreError::KeyMismatch(format!(
            "{} unexpected keys in model records, first {}: {}",
            extra.len(),
            shown.len(),
            shown.join(", ")
        )));
    }

    let stories: BTreeSet<&str> = truth.keys().map(|(s, _)| s.as_str()).collect();
    let n_stories = stories.len();
    for story in &stories {
        for norm_id in 1..=10u8 {
            if !truth.contains_key(&(story.to_string(), norm_id)) {
                return Err(CoreError::KeyMismatch(format!(
                    "ground truth lacks norm {norm_id} for story {story}"
                )));
            }
        }
    }

    let mut per_norm_accuracy = BTreeMap::new();
    for norm_id in 1..=10u8 {
        let matches = stories
            .iter()
            .filter(|story| {
                let key = (story.to_string(), norm_id);
                truth[&key] == model[&key]
            })
            .count();
        per_norm_accuracy.insert(norm_id, 100.0 * matches as f64 / n_stories as f64);
    }

    let overall_average = mean(per_norm_accuracy.values().copied());
    let mut category_accuracy = BTreeMap::new();
    category_accuracy.insert(
        NormCategory::Generic,
        mean(GENERIC_NORMS.iter().map(|n| per_norm_accuracy[n])),
    );
    category_accuracy.insert(
        NormCategory::RoleBased,
        mean(ROLE_BASED_NORMS.iter().map(|n| per_norm_accuracy[n])),
    );
    let mut kind_accuracy = BTreeMap::new();
    kind_accuracy.insert(
        NormKind::Prohibition,
        mean(PROHIBITION_NORMS.iter().map(|n| per_norm_accuracy[n])),
    );
    kind_accuracy.insert(
        NormKind::Obligation,
        mean(OBLIGATION_NORMS.iter().map(|n| per_norm_accuracy[n])),
    );

    let mut confusion = Confusion::default();
    for (key, truth_label) in truth {
        match (truth_label, model[key]) {
            (Binary::Yes, Binary::Yes) => confusion.truth_yes_model_yes += 1,
            (Binary::Yes, Binary::No) => confusion.truth_yes_model_no += 1,
            (Binary::No, Binary::Yes) => confusion.truth_no_model_yes += 1,
            (Binary::No, Binary::No) => confusion.truth_no_model_no += 1,
        }
    }

    Ok(ScoreReport {
        model_name: model_name.to_string(),
        n_stories,
        per_norm_accuracy,
        overall_average,
        category_accuracy,
        kind_accuracy,
        confusion,
    })
}

/// Miss rate and false-alarm rate as percentages. A zero-denominator row
/// yields `None`, reported as undefined rather than zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfusionRates {
    pub miss_rate: Option<f64>,
    pub false_alarm_rate: Option<f64>,
}

pub fn confusion_rates(report: &ScoreReport) -> ConfusionRates {
    let c = &report.confusion;
    let truth_yes = c.truth_yes_model_yes + c.truth_yes_model_no;
    let truth_no = c.truth_no_model_yes + c.truth_no_model_no;
    ConfusionRates {
        miss_rate: (truth_yes > 0).then(|| 100.0 * c.truth_yes_model_no as f64 / truth_yes as f64),
        false_alarm_rate: (truth_no > 0)
            .then(|| 100.0 * c.truth_no_model_yes as f64 / truth_no as f64),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusStats {
    pub total_events: usize,
    /// Surface texts occurring exactly once.
    pub unique_events: usize,
    /// Surface texts occurring more than once.
    pub duplicated_events: usize,
    pub frequency: BTreeMap<String, usize>,
}

/// Frequency table keyed by exact surface text.
pub fn corpus_stats(corpus: &[Story]) -> CorpusStats {
    let mut frequency: BTreeMap<String, usize> = BTreeMap::new();
    for story in corpus {
        for event in &story.events {
            *frequency.entry(event.text.clone()).or_default() += 1;
        }
    }
    CorpusStats {
        total_events: frequency.values().sum(),
        unique_events: frequency.values().filter(|&&n| n == 1).count(),
        duplicated_events: frequency.values().filter(|&&n| n > 1).count(),
        frequency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Event, EventKind};

    fn key(story: &str, norm: u8) -> LabelKey {
        (story.to_string(), norm)
    }

    fn full_truth(stories: usize, label: Binary) -> BTreeMap<LabelKey, Binary> {
        let mut truth = BTreeMap::new();
        for s in 0..stories {
            for n in 1..=10u8 {
                truth.insert(key(&format!("s{s:03}"), n), label);
            }
        }
        truth
    }

    fn records_from(truth: &BTreeMap<LabelKey, Binary>) -> Vec<ScoredLabel> {
        truth
            .iter()
            .map(|((story_id, norm_id), binary)| ScoredLabel {
                story_id: story_id.clone(),
                norm_id: *norm_id,
                binary: *binary,
            })
            .collect()
    }

    #[test]
    fn majority_vote_examples() {
        let mut set = AnnotationSet::default();
        for label in [Binary::Yes, Binary::Yes, Binary::No] {
            set.insert("s1", 1, label);
        }
        for label in [Binary::No, Binary::No, Binary::No] {
            set.insert("s1", 2, label);
        }
        let vote = majority_vote(&set).unwrap();
        assert_eq!(vote[&key("s1", 1)], Binary::Yes);
        assert_eq!(vote[&key("s1", 2)], Binary::No);
    }

    #[test]
    fn single_annotator_is_a_degenerate_majority() {
        let mut set = AnnotationSet::default();
        set.insert("s1", 1, Binary::Yes);
        let vote = majority_vote(&set).unwrap();
        assert_eq!(vote[&key("s1", 1)], Binary::Yes);
    }

    #[test]
    fn even_tie_is_rejected_with_key() {
        let mut set = AnnotationSet::default();
        set.insert("s7", 4, Binary::Yes);
        set.insert("s7", 4, Binary::No);
        let err = majority_vote(&set).unwrap_err();
        assert!(matches!(
            err,
            CoreError::TiedVote { story_id, norm_id } if story_id == "s7" && norm_id == 4
        ));
    }

    #[test]
    fn even_count_without_tie_is_fine() {
        let mut set = AnnotationSet::default();
        for label in [Binary::Yes, Binary::Yes, Binary::Yes, Binary::No] {
            set.insert("s1", 1, label);
        }
        assert_eq!(majority_vote(&set).unwrap()[&key("s1", 1)], Binary::Yes);
    }

    #[test]
    fn unequal_annotator_counts_rejected() {
        let mut set = AnnotationSet::default();
        set.insert("s1", 1, Binary::Yes);
        set.insert("s1", 2, Binary::Yes);
        set.insert("s1", 2, Binary::No);
        assert!(matches!(
            majority_vote(&set),
            Err(CoreError::InvalidAnnotations(_))
        ));
    }

    #[test]
    fn perfect_model_scores_one_hundred_everywhere() {
        let truth = full_truth(8, Binary::No);
        let report = score(&truth, &records_from(&truth), "m").unwrap();
        for accuracy in report.per_norm_accuracy.values() {
            assert_eq!(*accuracy, 100.0);
        }
        assert_eq!(report.overall_average, 100.0);
        assert_eq!(report.confusion.truth_no_model_yes, 0);
        assert_eq!(report.confusion.truth_yes_model_no, 0);
        assert_eq!(report.confusion.total(), 80);
    }

    #[test]
    fn fifty_six_of_eighty_is_seventy_percent() {
        let truth = full_truth(80, Binary::No);
        let mut records = records_from(&truth);
        // Flip 24 answers on norm 1 only.
        let mut flipped = 0;
        for record in records.iter_mut() {
            if record.norm_id == 1 && flipped < 24 {
                record.binary = Binary::Yes;
                flipped += 1;
            }
        }
        let report = score(&truth, &records, "m").unwrap();
        assert_eq!(report.per_norm_accuracy[&1], 70.0);
        assert_eq!(format_pct(report.per_norm_accuracy[&1], 2), "70.00");
    }

    #[test]
    fn missing_keys_listed() {
        let truth = full_truth(2, Binary::No);
        let mut records = records_from(&truth);
        records.truncate(15);
        let err = score(&truth, &records, "m").unwrap_err();
        match err {
            CoreError::KeyMismatch(message) => {
                assert!(message.contains("5 keys missing"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn score_is_order_invariant() {
        let truth = full_truth(5, Binary::No);
        let mut records = records_from(&truth);
        let a = score(&truth, &records, "m").unwrap();
        records.reverse();
        let b = score(&truth, &records, "m").unwrap();
        assert_eq!(a.per_norm_accuracy, b.per_norm_accuracy);
        assert_eq!(a.confusion, b.confusion);
    }

    #[test]
    fn confusion_rates_arithmetic() {
        let report = ScoreReport {
            model_name: "m".into(),
            n_stories: 12,
            per_norm_accuracy: BTreeMap::new(),
            overall_average: 0.0,
            category_accuracy: BTreeMap::new(),
            kind_accuracy: BTreeMap::new(),
            confusion: Confusion {
                truth_yes_model_yes: 10,
                truth_yes_model_no: 10,
                truth_no_model_yes: 10,
                truth_no_model_no: 90,
            },
        };
        let rates = confusion_rates(&report);
        assert_eq!(rates.miss_rate, Some(50.0));
        assert_eq!(rates.false_alarm_rate, Some(10.0));
    }

    #[test]
    fn degenerate_truth_row_is_undefined_not_zero() {
        let truth = full_truth(3, Binary::No);
        let report = score(&truth, &records_from(&truth), "m").unwrap();
        let rates = confusion_rates(&report);
        assert_eq!(rates.miss_rate, None);
        assert_eq!(rates.false_alarm_rate, Some(0.0));
    }

    #[test]
    fn corpus_stats_counts_by_surface_text() {
        let story = Story::from_events(
            "a",
            (0..6)
                .map(|i| {
                    Event::new(EventKind::Enter {
                        agent: "Emily".into(),
                        room: format!("r{i}"),
                    })
                })
                .collect(),
        );
        let stats = corpus_stats(&[story.clone()]);
        assert_eq!(stats.total_events, 6);
        assert_eq!(stats.unique_events, 6);
        assert_eq!(stats.duplicated_events, 0);

        let stats = corpus_stats(&[story.clone(), story]);
        assert_eq!(stats.total_events, 12);
        assert_eq!(stats.unique_events, 0);
        assert_eq!(stats.duplicated_events, 6);
    }
}
