//! Datasets, epoch loops, the six training variants and the multi-seed
//! trial harness.

mod checkpoint;
mod data;
mod epoch;
mod trainer;
mod trials;
mod variant;

pub use checkpoint::Checkpoint;
pub use data::{
    load_gazetteer, CleanSet, DataError, EvalSet, ExperimentData, LabeledWindows, SplitDataset,
    Tracked,
};
pub use epoch::{subsample_noisy, train_clean_epoch, train_cleaner_epoch, train_noisy_epoch};
pub use trainer::{train_variant, EpochRecord, TrainSettings, TrialResult};
pub use trials::{
    run_trial, run_trials, run_trials_with_models, summarize, sweep, sweep_csv, Summary, SweepAxis,
    SweepRow, TrialSummary, DEFAULT_NOISY_FACTORS,
};
pub use variant::{DataUsage, EpochKind, ThetaInit, Variant, VariantSpec};

use thiserror::Error;

use crate::annotate::ConfusionError;
use crate::eval::EvalError;
use crate::tensor::{OptimError, TensorError};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),
    #[error("invalid {axis} value {value}")]
    AxisValue { axis: SweepAxis, value: f64 },
    #[error("noisy sample of {requested} exceeds the {available} noisy examples")]
    NoisyTooLarge { requested: usize, available: usize },
    #[error("nothing to train on ({0})")]
    EmptyData(&'static str),
    #[error("loss became non-finite ({0})")]
    NonFiniteLoss(f64),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error(transparent)]
    Confusion(#[from] ConfusionError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Data(#[from] DataError),
}
