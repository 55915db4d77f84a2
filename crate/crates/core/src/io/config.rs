use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::{ChannelConfig, ChannelError, NoiseChannelSpec};
use crate::model::{LabelSet, Pooling};
use crate::tensor::AdamConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot serialize config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("`{key}`: {msg}")]
    Value { key: &'static str, msg: String },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Where noisy labels come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseSource {
    /// The configured synthetic or empirical channel applied to gold labels.
    #[default]
    Channel,
    /// Gazetteer lookup over the training tokens.
    Gazetteer,
}

/// Every knob of a run. Serialized as flat `key = value` TOML; unknown keys
/// are rejected. Paths left unset select the bundled toy corpus, the bundled
/// toy gazetteer and random embeddings respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variant: String,
    /// Root seed; trial `i` runs with `seed + i`.
    pub seed: u64,
    pub n_seeds: usize,
    /// Run trials on the rayon pool.
    pub parallel: bool,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dev_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_path: Option<String>,
    pub toy_seed: u64,
    pub toy_train_tokens: usize,
    pub toy_dev_tokens: usize,
    pub toy_test_tokens: usize,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub embeddings_path: Option<String>,
    pub embedding_dim: usize,
    pub embedding_seed: u64,
    pub trainable_embeddings: bool,

    pub state_size: usize,
    pub dense_size: usize,
    pub cleaner_size: usize,
    pub pooling: Pooling,

    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub epochs: usize,
    /// Extra clean epochs before the noise matrix of the adaptation model is
    /// initialized from the model's predictions.
    pub pretrain_epochs: usize,
    /// Smoothing for the count-based noise initialization.
    pub alpha: f64,

    /// Size of the clean set in tokens.
    pub clean_tokens: usize,
    /// Per-epoch noisy sample size as a multiple of the clean window count.
    pub noisy_factor: f64,
    /// The noisy set is the whole training set (clean sentences included)
    /// rather than its remainder.
    pub overlap: bool,

    pub noise_source: NoiseSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gazetteer_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocklist_path: Option<String>,
    pub channel_kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_mapping: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_matrix: Option<Vec<Vec<f64>>>,
    pub channel_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let adam = AdamConfig::default();
        ExperimentConfig {
            variant: "noise-model".into(),
            seed: 1,
            n_seeds: 5,
            parallel: false,
            train_path: None,
            dev_path: None,
            test_path: None,
            toy_seed: 7,
            toy_train_tokens: 20_000,
            toy_dev_tokens: 3_000,
            toy_test_tokens: 3_000,
            embeddings_path: None,
            embedding_dim: 16,
            embedding_seed: 11,
            trainable_embeddings: true,
            state_size: 16,
            dense_size: 16,
            cleaner_size: 8,
            pooling: Pooling::default(),
            learning_rate: adam.learning_rate,
            beta1: adam.beta1,
            beta2: adam.beta2,
            epsilon: adam.epsilon,
            batch_size: 32,
            epochs: 40,
            pretrain_epochs: 5,
            alpha: 1.0,
            clean_tokens: 400,
            noisy_factor: 1.0,
            overlap: false,
            noise_source: NoiseSource::default(),
            gazetteer_path: None,
            blocklist_path: None,
            channel_kind: "annotation".into(),
            channel_rate: None,
            channel_mapping: None,
            channel_matrix: None,
            channel_seed: 3,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |key, msg: &str| {
            Err(ConfigError::Value {
                key,
                msg: msg.to_string(),
            })
        };
        if self.n_seeds == 0 {
            return err("n_seeds", "must be at least 1");
        }
        if self.batch_size == 0 {
            return err("batch_size", "must be positive");
        }
        if self.epochs == 0 {
            return err("epochs", "must be positive");
        }
        if self.embedding_dim == 0
            || self.state_size == 0
            || self.dense_size == 0
            || self.cleaner_size == 0
        {
            return err("embedding_dim", "layer sizes must be positive");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return err("learning_rate", "must be positive and finite");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return err("beta1", "moment decay rates must lie in [0, 1)");
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return err("epsilon", "must be positive");
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            return err("alpha", "must be positive");
        }
        if self.clean_tokens == 0 {
            return err("clean_tokens", "must be positive");
        }
        if !(self.noisy_factor >= 0.0 && self.noisy_factor.is_finite()) {
            return err("noisy_factor", "must be a non-negative number");
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }

    pub fn channel(&self) -> ChannelConfig {
        ChannelConfig {
            kind: self.channel_kind.clone(),
            rate: self.channel_rate,
            mapping: self.channel_mapping.clone(),
            matrix: self.channel_matrix.clone(),
            seed: self.channel_seed,
        }
    }

    pub fn channel_spec(&self, labels: &LabelSet) -> Result<NoiseChannelSpec, ConfigError> {
        Ok(self.channel().to_spec(labels)?)
    }
}
