use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::LabelSet;
use crate::rng::substream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("flip rate {0} outside [0, 1]")]
    Rate(f64),
    #[error("permutation {0:?} is not a bijection on the classes")]
    Permutation(Vec<usize>),
    #[error("channel matrix must be {k}x{k}")]
    MatrixShape { k: usize },
    #[error("channel matrix row {row} is not a distribution (sum {sum})")]
    MatrixRow { row: usize, sum: f64 },
    #[error("label {label} out of range for {k} classes")]
    Label { label: usize, k: usize },
    #[error("unknown channel `{0}` (expected uniform, permutation, empirical or annotation)")]
    UnknownKind(String),
    #[error("channel `{kind}` needs `{field}`")]
    MissingField { kind: String, field: &'static str },
    #[error("preset needs class `{0}` in the label set")]
    PresetClass(String),
}

/// How clean labels are corrupted into observed labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ChannelKind {
    /// With probability `rate`, replace the label by a uniformly chosen
    /// different class.
    Uniform { rate: f64 },
    /// Class `i` is always observed as `mapping[i]`.
    Permutation { mapping: Vec<usize> },
    /// Class `i` is resampled from row `i` of a row-stochastic matrix.
    Empirical { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannelSpec {
    pub kind: ChannelKind,
    pub seed: u64,
}

/// Rows over `O, PER, ORG, LOC, MISC`: person, organization and
/// miscellaneous names mostly collapse to `O`, locations are mostly kept,
/// `MISC` is never produced and a few `O` tokens become false positives.
pub const ANNOTATION_SHAPED: [(&str, [f64; 5]); 5] = [
    ("O", [0.97, 0.01, 0.005, 0.015, 0.0]),
    ("PER", [0.74, 0.26, 0.0, 0.0, 0.0]),
    ("ORG", [0.85, 0.03, 0.10, 0.02, 0.0]),
    ("LOC", [0.30, 0.02, 0.03, 0.65, 0.0]),
    ("MISC", [0.90, 0.02, 0.03, 0.05, 0.0]),
];

impl NoiseChannelSpec {
    /// The annotation-shaped empirical preset, laid out for `labels`.
    pub fn annotation_shaped(labels: &LabelSet, seed: u64) -> Result<Self, ChannelError> {
        let k = labels.k();
        let idx = |name: &str| {
            labels
                .index(name)
                .ok_or_else(|| ChannelError::PresetClass(name.into()))
        };
        if k != ANNOTATION_SHAPED.len() {
            return Err(ChannelError::MatrixShape { k });
        }
        let mut matrix = vec![vec![0.0; k]; k];
        for (row_name, row) in ANNOTATION_SHAPED {
            let i = idx(row_name)?;
            for ((col_name, _), p) in ANNOTATION_SHAPED.iter().zip(row) {
                matrix[i][idx(col_name)?] = p;
            }
        }
        Ok(NoiseChannelSpec {
            kind: ChannelKind::Empirical { matrix },
            seed,
        })
    }

    pub fn validate(&self, k: usize) -> Result<(), ChannelError> {
        match &self.kind {
            ChannelKind::Uniform { rate } => {
                if !(0.0..=1.0).contains(rate) {
                    return Err(ChannelError::Rate(*rate));
                }
            }
            ChannelKind::Permutation { mapping } => {
                let mut seen = vec![false; k];
                let ok = mapping.len() == k
                    && mapping
                        .iter()
                        .all(|&m| m < k && !std::mem::replace(&mut seen[m], true));
                if !ok {
                    return Err(ChannelError::Permutation(mapping.clone()));
                }
            }
            ChannelKind::Empirical { matrix } => {
                if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
                    return Err(ChannelError::MatrixShape { k });
                }
                for (row, r) in matrix.iter().enumerate() {
                    let sum: f64 = r.iter().sum();
                    if r.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > 1e-9 {
                        return Err(ChannelError::MatrixRow { row, sum });
                    }
                }
            }
        }
        Ok(())
    }

    /// The channel as a `k×k` matrix `p(observed = j | true = i)`.
    pub fn transition_matrix(&self, k: usize) -> Result<Vec<Vec<f64>>, ChannelError> {
        self.validate(k)?;
        Ok(match &self.kind {
            ChannelKind::Uniform { rate } => (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            if i == j {
                                1.0 - rate
                            } else {
                                rate / (k - 1) as f64
                            }
                        })
                        .collect()
                })
                .collect(),
            ChannelKind::Permutation { mapping } => (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| if mapping[i] == j { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect(),
            ChannelKind::Empirical { matrix } => matrix.clone(),
        })
    }
}

/// Corrupts `labels` through the channel. Reproducible for a fixed seed.
pub fn apply_channel(
    labels: &[usize],
    spec: &NoiseChannelSpec,
    k: usize,
) -> Result<Vec<usize>, ChannelError> {
    spec.validate(k)?;
    if let Some(&label) = labels.iter().find(|&&l| l >= k) {
        return Err(ChannelError::Label { label, k });
    }
    let mut rng = substream(spec.seed, "channel", 0);
    Ok(match &spec.kind {
        ChannelKind::Uniform { rate } => labels
            .iter()
            .map(|&y| {
                if k > 1 && rng.gen::<f64>() < *rate {
                    let other = rng.gen_range(0..k - 1);
                    if other >= y {
                        other + 1
                    } else {
                        other
                    }
                } else {
                    y
                }
            })
            .collect(),
        ChannelKind::Permutation { mapping } => labels.iter().map(|&y| mapping[y]).collect(),
        ChannelKind::Empirical { matrix } => {
            let rows: Vec<WeightedIndex<f64>> = matrix
                .iter()
                .enumerate()
                .map(|(row, r)| {
                    WeightedIndex::new(r).map_err(|_| ChannelError::MatrixRow {
                        row,
                        sum: r.iter().sum(),
                    })
                })
                .collect::<Result<_, _>>()?;
            labels.iter().map(|&y| rows[y].sample(&mut rng)).collect()
        }
    })
}

/// Flat, serializable description of a channel, as found in config files.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    /// `uniform`, `permutation`, `empirical` or `annotation`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub seed: u64,
}

impl ChannelConfig {
    pub fn to_spec(&self, labels: &LabelSet) -> Result<NoiseChannelSpec, ChannelError> {
        let missing = |field| ChannelError::MissingField {
            kind: self.kind.clone(),
            field,
        };
        let kind = match self.kind.as_str() {
            "uniform" => ChannelKind::Uniform {
                rate: self.rate.ok_or_else(|| missing("rate"))?,
            },
            "permutation" => ChannelKind::Permutation {
                mapping: self.mapping.clone().ok_or_else(|| missing("mapping"))?,
            },
            "empirical" => ChannelKind::Empirical {
                matrix: self.matrix.clone().ok_or_else(|| missing("matrix"))?,
            },
            "annotation" => return NoiseChannelSpec::annotation_shaped(labels, self.seed),
            other => return Err(ChannelError::UnknownKind(other.to_string())),
        };
        let spec = NoiseChannelSpec {
            kind,
            seed: self.seed,
        };
        spec.validate(labels.k())?;
        Ok(spec)
    }
}
