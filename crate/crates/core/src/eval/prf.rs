use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::spans::{extract_spans, EntitySpan};
use crate::annotate::{estimate_confusion, ConfusionCounts, ConfusionError};
use crate::model::LabelSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("{gold} gold sequences but {predicted} predicted")]
    SequenceCount { gold: usize, predicted: usize },
    #[error("sequence {index}: gold has {gold} tokens, prediction {predicted}")]
    SequenceLength {
        index: usize,
        gold: usize,
        predicted: usize,
    },
    #[error("label {label} out of range for {k} classes")]
    Label { label: usize, k: usize },
    #[error(transparent)]
    Confusion(#[from] ConfusionError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    /// Number of gold spans.
    pub support: u64,
}

impl ClassScores {
    fn from_counts(class: &str, tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |n: u64, d: u64| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassScores {
            class: class.to_string(),
            precision,
            recall,
            f1,
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            support: tp + fn_,
        }
    }
}

/// Entity-level scores: one row per non-null class plus micro-averaged
/// overall scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrfReport {
    pub classes: Vec<ClassScores>,
    pub overall: ClassScores,
}

impl PrfReport {
    pub fn class(&self, name: &str) -> Option<&ClassScores> {
        self.classes.iter().find(|c| c.class == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,precision,recall,f1,tp,fp,fn,support\n");
        for c in self.classes.iter().chain(std::iter::once(&self.overall)) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.class,
                c.precision,
                c.recall,
                c.f1,
                c.true_positives,
                c.false_positives,
                c.false_negatives,
                c.support
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A predicted span is a true positive iff the gold sequence holds a span
/// with the same start, end and class.
pub fn entity_prf(
    gold: &[Vec<usize>],
    predicted: &[Vec<usize>],
    labels: &LabelSet,
) -> Result<PrfReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::SequenceCount {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let k = labels.k();
    let null = labels.null();
    let (mut tp, mut fp, mut fn_) = (vec![0u64; k], vec![0u64; k], vec![0u64; k]);
    for (index, (g, p)) in gold.iter().zip(predicted).enumerate() {
        if g.len() != p.len() {
            return Err(EvalError::SequenceLength {
                index,
                gold: g.len(),
                predicted: p.len(),
            });
        }
        if let Some(&label) = g.iter().chain(p).find(|&&l| l >= k) {
            return Err(EvalError::Label { label, k });
        }
        let gold_spans: HashSet<EntitySpan> = extract_spans(g, null).into_iter().collect();
        let pred_spans = extract_spans(p, null);
        let mut matched = 0usize;
        for s in &pred_spans {
            if gold_spans.contains(s) {
                tp[s.class] += 1;
                matched += 1;
            } else {
                fp[s.class] += 1;
            }
        }
        debug_assert!(matched <= gold_spans.len());
        let pred_set: HashSet<&EntitySpan> = pred_spans.iter().collect();
        for s in &gold_spans {
            if !pred_set.contains(s) {
                fn_[s.class] += 1;
            }
        }
    }
    let classes = labels
        .entity_classes()
        .map(|c| ClassScores::from_counts(labels.name(c), tp[c], fp[c], fn_[c]))
        .collect::<Vec<_>>();
    let sum = |v: &[u64]| v.iter().sum::<u64>();
    let overall = ClassScores::from_counts("overall", sum(&tp), sum(&fp), sum(&fn_));
    Ok(PrfReport { classes, overall })
}

/// Token-level confusion with gold labels as rows.
pub fn token_confusion(
    gold: &[usize],
    predicted: &[usize],
    k: usize,
) -> Result<ConfusionCounts, EvalError> {
    Ok(estimate_confusion(gold, predicted, k)?)
}

/// Scores automatic labels against gold labels of the same corpus.
pub fn annotation_quality(
    gold: &[Vec<usize>],
    automatic: &[Vec<usize>],
    labels: &LabelSet,
) -> Result<PrfReport, EvalError> {
    entity_prf(gold, automatic, labels)
}
