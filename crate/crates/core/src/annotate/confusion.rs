use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Classifier, Window};
use crate::tensor::Tensor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfusionError {
    #[error("label sequences differ in length ({0} vs {1})")]
    Length(usize, usize),
    #[error("label {label} at position {position} out of range for {k} classes")]
    Label {
        label: usize,
        position: usize,
        k: usize,
    },
    #[error("smoothing must be positive, got {0}")]
    Smoothing(f64),
    #[error("need at least two classes, got {0}")]
    Classes(usize),
}

/// `counts[i][j]` = number of positions with clean label `i` and noisy
/// label `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    counts: Vec<Vec<u64>>,
}

impl ConfusionCounts {
    pub fn zeros(k: usize) -> Self {
        ConfusionCounts {
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_total(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn total(&self) -> u64 {
        (0..self.k()).map(|i| self.row_total(i)).sum()
    }
}

pub fn estimate_confusion(
    clean: &[usize],
    noisy: &[usize],
    k: usize,
) -> Result<ConfusionCounts, ConfusionError> {
    if clean.len() != noisy.len() {
        return Err(ConfusionError::Length(clean.len(), noisy.len()));
    }
    let mut counts = ConfusionCounts::zeros(k);
    for (position, (&y, &z)) in clean.iter().zip(noisy).enumerate() {
        for label in [y, z] {
            if label >= k {
                return Err(ConfusionError::Label { label, position, k });
            }
        }
        counts.counts[y][z] += 1;
    }
    Ok(counts)
}

/// Noise weights whose row softmax is the smoothed empirical confusion:
/// `b[i][j] = ln((counts[i][j] + α) / (rowtotal[i] + k·α))`.
pub fn init_noise_weights(counts: &ConfusionCounts, alpha: f64) -> Result<Tensor, ConfusionError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ConfusionError::Smoothing(alpha));
    }
    let k = counts.k();
    let mut b = Tensor::zeros(&[k, k]);
    for i in 0..k {
        let denom = counts.row_total(i) as f64 + k as f64 * alpha;
        for j in 0..k {
            b.set(i, j, ((counts.get(i, j) as f64 + alpha) / denom).ln());
        }
    }
    Ok(b)
}

pub fn identity_init(k: usize) -> Result<Tensor, ConfusionError> {
    if k < 2 {
        return Err(ConfusionError::Classes(k));
    }
    Ok(Tensor::identity(k))
}

/// Noise weights from a model pretrained on noisy data only: its
/// predictions stand in for the unseen clean labels and are cross-counted
/// against the observed noisy labels.
pub fn pretrained_init(
    pretrained: &Classifier,
    windows: &[Window],
    noisy_labels: &[usize],
    alpha: f64,
) -> Result<Tensor, ConfusionError> {
    let predicted = pretrained.predict(windows);
    pretrained_init_from_predictions(&predicted, noisy_labels, pretrained.dims().classes, alpha)
}

pub fn pretrained_init_from_predictions(
    predicted: &[usize],
    noisy_labels: &[usize],
    k: usize,
    alpha: f64,
) -> Result<Tensor, ConfusionError> {
    let counts = estimate_confusion(predicted, noisy_labels, k)?;
    init_noise_weights(&counts, alpha)
}
