use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TrainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    BaseModel,
    BaseModelWithNoise,
    NoiseModel,
    NoiseModelWithIdentityInit,
    NoiseAdaptationModel,
    NoiseCleaningModel,
}

/// How the noise weights are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaInit {
    /// No noise layer.
    None,
    /// Smoothed confusion counts between clean and noisy labels of `C`.
    Counts,
    Identity,
    /// Confusion between a noisy-data-pretrained model and the noisy labels.
    Pretrained,
}

/// Which splits a variant trains on and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataUsage {
    CleanOnly,
    /// `C` and a noisy sample mixed into one set, no noise layer.
    Pooled,
    /// Clean and noise-layer epochs in turn.
    Alternating,
    /// All of `N` every epoch; `C` unused.
    NoisyOnly,
    /// A noisy sample relabeled by the cleaning network, pooled with `C`.
    Cleaned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantSpec {
    pub variant: Variant,
    pub theta_init: ThetaInit,
    pub data_usage: DataUsage,
}

/// What a single epoch trains on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpochKind {
    Clean,
    Noisy,
    Pooled,
    NoisyFull,
    Cleaning,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::BaseModel,
        Variant::BaseModelWithNoise,
        Variant::NoiseModel,
        Variant::NoiseModelWithIdentityInit,
        Variant::NoiseAdaptationModel,
        Variant::NoiseCleaningModel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::BaseModel => "base-model",
            Variant::BaseModelWithNoise => "base-model-with-noise",
            Variant::NoiseModel => "noise-model",
            Variant::NoiseModelWithIdentityInit => "noise-model-with-identity-init",
            Variant::NoiseAdaptationModel => "noise-adaptation-model",
            Variant::NoiseCleaningModel => "noise-cleaning-model",
        }
    }

    pub fn spec(self) -> VariantSpec {
        let (theta_init, data_usage) = match self {
            Variant::BaseModel => (ThetaInit::None, DataUsage::CleanOnly),
            Variant::BaseModelWithNoise => (ThetaInit::None, DataUsage::Pooled),
            Variant::NoiseModel => (ThetaInit::Counts, DataUsage::Alternating),
            Variant::NoiseModelWithIdentityInit => (ThetaInit::Identity, DataUsage::Alternating),
            Variant::NoiseAdaptationModel => (ThetaInit::Pretrained, DataUsage::NoisyOnly),
            Variant::NoiseCleaningModel => (ThetaInit::None, DataUsage::Cleaned),
        };
        VariantSpec {
            variant: self,
            theta_init,
            data_usage,
        }
    }

    /// Whether predictions pass through a learned noise layer during
    /// training.
    pub fn has_noise_layer(self) -> bool {
        self.spec().theta_init != ThetaInit::None
    }

    /// Epoch kinds in training order. The alternating variants start with a
    /// clean epoch and then swap, ending on a noisy epoch for an even count.
    pub fn schedule(self, epochs: usize) -> Vec<EpochKind> {
        let kind = match self.spec().data_usage {
            DataUsage::CleanOnly => EpochKind::Clean,
            DataUsage::Pooled => EpochKind::Pooled,
            DataUsage::NoisyOnly => EpochKind::NoisyFull,
            DataUsage::Cleaned => EpochKind::Cleaning,
            DataUsage::Alternating => {
                return (0..epochs)
                    .map(|e| {
                        if e % 2 == 0 {
                            EpochKind::Clean
                        } else {
                            EpochKind::Noisy
                        }
                    })
                    .collect()
            }
        };
        vec![kind; epochs]
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = TrainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| TrainError::UnknownVariant(s.to_string()))
    }
}
