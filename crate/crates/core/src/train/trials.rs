use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::ExperimentData;
use super::trainer::{train_variant, TrainSettings, TrialResult};
use super::variant::Variant;
use super::TrainError;
use crate::io::ExperimentConfig;
use crate::model::Classifier;

/// Mean and standard error (`stdev / √n`, sample deviation) of repeated
/// trials. A single trial reports zero error and sets `degenerate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub se: f64,
    pub two_se: f64,
    pub n: usize,
    pub degenerate: bool,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len();
    let mean = if n == 0 {
        0.0
    } else {
        values.iter().sum::<f64>() / n as f64
    };
    let se = if n < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        var.sqrt() / (n as f64).sqrt()
    };
    Summary {
        mean,
        se,
        two_se: 2.0 * se,
        n,
        degenerate: n < 2,
    }
}

impl Summary {
    /// Standard error of the difference of two independent means.
    pub fn pooled_se(&self, other: &Summary) -> f64 {
        (self.se * self.se + other.se * other.se).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub variant: Variant,
    pub summary: Summary,
    pub trials: Vec<TrialResult>,
}

impl TrialSummary {
    /// Every epoch record of every trial as line-delimited JSON.
    pub fn epoch_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.trials {
            for r in &t.epochs {
                out.push_str(&serde_json::to_string(r).expect("record serializes"));
                out.push('\n');
            }
        }
        out
    }
}

/// One seeded trial: samples `C` with the seed, then trains.
pub fn run_trial(
    variant: Variant,
    data: &ExperimentData,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(TrialResult, Classifier), TrainError> {
    let split = data.split(cfg.clean_tokens, cfg.overlap, seed)?;
    train_variant(
        variant,
        &split,
        &data.embeddings,
        &TrainSettings::from_config(cfg),
        seed,
    )
}

/// `cfg.n_seeds` trials with seeds `cfg.seed, cfg.seed + 1, …`. Results are
/// in seed order whether or not they run in parallel.
pub fn run_trials(
    variant: Variant,
    data: &ExperimentData,
    cfg: &ExperimentConfig,
) -> Result<TrialSummary, TrainError> {
    Ok(run_trials_with_models(variant, data, cfg)?.0)
}

/// [`run_trials`], also returning each trial's model at its selected epoch.
pub fn run_trials_with_models(
    variant: Variant,
    data: &ExperimentData,
    cfg: &ExperimentConfig,
) -> Result<(TrialSummary, Vec<Classifier>), TrainError> {
    if cfg.n_seeds == 0 {
        return Err(TrainError::EmptyData("n_seeds"));
    }
    let one = |i: usize| run_trial(variant, data, cfg, cfg.seed + i as u64);
    let outcomes: Vec<(TrialResult, Classifier)> = if cfg.parallel {
        (0..cfg.n_seeds)
            .into_par_iter()
            .map(one)
            .collect::<Result<_, _>>()?
    } else {
        (0..cfg.n_seeds).map(one).collect::<Result<_, _>>()?
    };
    let (trials, models): (Vec<TrialResult>, Vec<Classifier>) = outcomes.into_iter().unzip();
    let f1s: Vec<f64> = trials.iter().map(|t| t.test_f1).collect();
    Ok((
        TrialSummary {
            variant,
            summary: summarize(&f1s),
            trials,
        },
        models,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    /// Clean set size in tokens; the noisy sample follows it.
    CleanSize,
    /// Noisy sample size as a multiple of a fixed clean set.
    NoisyFactor,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::CleanSize => "clean-size",
            SweepAxis::NoisyFactor => "noisy-factor",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = TrainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clean-size" => Ok(SweepAxis::CleanSize),
            "noisy-factor" => Ok(SweepAxis::NoisyFactor),
            other => Err(TrainError::UnknownAxis(other.to_string())),
        }
    }
}

/// Noisy-sample factors swept when none are given. Includes 5 alongside the
/// usual 0.5 to 50 range.
pub const DEFAULT_NOISY_FACTORS: [f64; 8] = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 50.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub variant: String,
    pub mean_f1: f64,
    pub se: f64,
    pub n_seeds: usize,
}

/// Runs every variant at every axis value. Rows come out value-major in the
/// order given.
pub fn sweep(
    axis: SweepAxis,
    values: &[f64],
    variants: &[Variant],
    data: &ExperimentData,
    cfg: &ExperimentConfig,
) -> Result<Vec<SweepRow>, TrainError> {
    if values.is_empty() || variants.is_empty() {
        return Err(TrainError::EmptyData("sweep values"));
    }
    let mut rows = Vec::with_capacity(values.len() * variants.len());
    for &value in values {
        let mut point = cfg.clone();
        match axis {
            SweepAxis::CleanSize => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(TrainError::AxisValue { axis, value });
                }
                point.clean_tokens = value as usize;
            }
            SweepAxis::NoisyFactor => {
                if !(value >= 0.0 && value.is_finite()) {
                    return Err(TrainError::AxisValue { axis, value });
                }
                point.noisy_factor = value;
            }
        }
        for &variant in variants {
            let s = run_trials(variant, data, &point)?;
            rows.push(SweepRow {
                axis_value: value,
                variant: variant.name().to_string(),
                mean_f1: s.summary.mean,
                se: s.summary.se,
                n_seeds: s.summary.n,
            });
        }
    }
    Ok(rows)
}

/// CSV with columns `axis_value, variant, mean_f1, se, n_seeds`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}
