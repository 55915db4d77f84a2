use serde::{Deserialize, Serialize};

use super::data::SplitDataset;
use super::epoch::{subsample_noisy, train_clean_epoch, train_cleaner_epoch, train_noisy_epoch};
use super::variant::{DataUsage, EpochKind, ThetaInit, Variant};
use super::TrainError;
use crate::annotate::{estimate_confusion, identity_init, init_noise_weights, pretrained_init};
use crate::eval::PrfReport;
use crate::io::ExperimentConfig;
use crate::model::{Classifier, Embeddings, ModelDims, NoiseLayer, Pooling, Window};
use crate::rng::substream;
use crate::tensor::{AdamConfig, AdamState, Tensor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSettings {
    pub adam: AdamConfig,
    pub batch_size: usize,
    pub epochs: usize,
    pub pretrain_epochs: usize,
    pub alpha: f64,
    /// Noisy sample size per epoch relative to the clean window count.
    pub noisy_factor: f64,
    pub state_size: usize,
    pub dense_size: usize,
    pub cleaner_size: usize,
    pub pooling: Pooling,
    pub trainable_embeddings: bool,
}

impl TrainSettings {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        TrainSettings {
            adam: cfg.adam(),
            batch_size: cfg.batch_size,
            epochs: cfg.epochs,
            pretrain_epochs: cfg.pretrain_epochs,
            alpha: cfg.alpha,
            noisy_factor: cfg.noisy_factor,
            state_size: cfg.state_size,
            dense_size: cfg.dense_size,
            cleaner_size: cfg.cleaner_size,
            pooling: cfg.pooling,
            trainable_embeddings: cfg.trainable_embeddings,
        }
    }

    /// `round(factor · clean_len)`.
    pub fn noisy_size(&self, clean_len: usize) -> usize {
        (self.noisy_factor * clean_len as f64).round() as usize
    }
}

/// One line of the per-epoch metrics log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub variant: Variant,
    pub seed: u64,
    pub epoch: usize,
    pub kind: EpochKind,
    pub train_loss: f64,
    pub dev_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub variant: Variant,
    pub seed: u64,
    pub clean_size: usize,
    pub noisy_size: usize,
    pub epochs: Vec<EpochRecord>,
    /// Epoch with the highest dev F1; the earliest wins ties.
    pub best_epoch: usize,
    pub dev_f1: f64,
    pub test_f1: f64,
    pub test: PrfReport,
    /// Row-stochastic noise matrix of the selected epoch, for variants with
    /// a noise layer.
    pub theta: Option<Tensor>,
    pub noise_weights: Option<Tensor>,
}

fn gather(windows: &[Window], labels: &[usize], ids: &[usize]) -> (Vec<Window>, Vec<usize>) {
    ids.iter().map(|&i| (windows[i], labels[i])).unzip()
}

/// Trains one variant from a fresh model seeded by `seed` and returns the
/// result together with the model restored to its best epoch.
pub fn train_variant(
    variant: Variant,
    data: &SplitDataset<'_>,
    embeddings: &Embeddings,
    settings: &TrainSettings,
    seed: u64,
) -> Result<(TrialResult, Classifier), TrainError> {
    let labels = data.labels;
    let k = labels.k();
    let dims = ModelDims {
        vocab_size: embeddings.vocab.len(),
        embedding_dim: embeddings.dim(),
        state_size: settings.state_size,
        dense_size: settings.dense_size,
        classes: k,
        cleaner_size: settings.cleaner_size,
    };
    let mut model = Classifier::new(
        dims,
        settings.pooling,
        embeddings.table.clone(),
        settings.trainable_embeddings,
        &mut substream(seed, "init", 0),
    )?;
    let mut adam = AdamState::new(settings.adam, model.params());
    let batch = settings.batch_size;
    let schedule = variant.schedule(settings.epochs);
    let samples_noisy = matches!(
        variant.spec().data_usage,
        DataUsage::Pooled | DataUsage::Alternating | DataUsage::Cleaned
    );
    let noisy_size = if samples_noisy {
        settings.noisy_size(data.clean_len)
    } else {
        data.noisy_len
    };
    if noisy_size > data.noisy_len {
        return Err(TrainError::NoisyTooLarge {
            requested: noisy_size,
            available: data.noisy_len,
        });
    }

    match variant.spec().theta_init {
        ThetaInit::None => {}
        ThetaInit::Counts => {
            let c = data.clean.read();
            let counts = estimate_confusion(&c.labels, &c.noisy_labels, k)?;
            model.set_noise_weights(&init_noise_weights(&counts, settings.alpha)?)?;
        }
        ThetaInit::Identity => model.set_noise_weights(&identity_init(k)?)?,
        ThetaInit::Pretrained => {
            let n = data.noisy.read();
            for e in 0..settings.pretrain_epochs {
                let mut rng = substream(seed, "pretrain-shuffle", e as u64);
                train_clean_epoch(
                    &mut model, &mut adam, &n.windows, &n.labels, batch, &mut rng,
                )?;
            }
            let b = pretrained_init(&model, &n.windows, &n.labels, settings.alpha)?;
            model.set_noise_weights(&b)?;
        }
    }

    let mut records = Vec::with_capacity(schedule.len());
    let mut best: Option<(f64, usize, crate::tensor::ParamSet)> = None;
    for (epoch, &kind) in schedule.iter().enumerate() {
        let e = epoch as u64;
        let mut rng = substream(seed, "shuffle", e);
        let loss = match kind {
            EpochKind::Clean => {
                let c = data.clean.read();
                train_clean_epoch(
                    &mut model, &mut adam, &c.windows, &c.labels, batch, &mut rng,
                )?
            }
            EpochKind::Noisy => {
                let n = data.noisy.read();
                let ids = subsample_noisy(n.windows.len(), noisy_size, seed, e)?;
                let (w, z) = gather(&n.windows, &n.labels, &ids);
                train_noisy_epoch(
                    &mut model,
                    &mut adam,
                    &w,
                    &z,
                    NoiseLayer::Learned,
                    batch,
                    &mut rng,
                )?
            }
            EpochKind::NoisyFull => {
                let n = data.noisy.read();
                train_noisy_epoch(
                    &mut model,
                    &mut adam,
                    &n.windows,
                    &n.labels,
                    NoiseLayer::Learned,
                    batch,
                    &mut rng,
                )?
            }
            EpochKind::Pooled => {
                let c = data.clean.read();
                let n = data.noisy.read();
                let ids = subsample_noisy(n.windows.len(), noisy_size, seed, e)?;
                let (mut w, mut y) = gather(&n.windows, &n.labels, &ids);
                w.extend_from_slice(&c.windows);
                y.extend_from_slice(&c.labels);
                train_clean_epoch(&mut model, &mut adam, &w, &y, batch, &mut rng)?
            }
            EpochKind::Cleaning => {
                let c = data.clean.read();
                let mut cleaner_rng = substream(seed, "cleaner-shuffle", e);
                train_cleaner_epoch(
                    &mut model,
                    &mut adam,
                    &c.windows,
                    &c.noisy_labels,
                    &c.labels,
                    batch,
                    &mut cleaner_rng,
                )?;
                let n = data.noisy.read();
                let ids = subsample_noisy(n.windows.len(), noisy_size, seed, e)?;
                let (mut w, z) = gather(&n.windows, &n.labels, &ids);
                let mut y = model.clean_labels(&w, &z)?;
                w.extend_from_slice(&c.windows);
                y.extend_from_slice(&c.labels);
                train_clean_epoch(&mut model, &mut adam, &w, &y, batch, &mut rng)?
            }
        };
        let dev_f1 = data.dev.score(&model, labels)?.overall.f1;
        records.push(EpochRecord {
            variant,
            seed,
            epoch,
            kind,
            train_loss: loss,
            dev_f1,
        });
        if best.as_ref().is_none_or(|(f, _, _)| dev_f1 > *f) {
            best = Some((dev_f1, epoch, model.params().clone()));
        }
    }

    let (dev_f1, best_epoch, snapshot) = best.ok_or(TrainError::EmptyData("schedule"))?;
    model.restore(snapshot);
    let test = data.test.score(&model, labels)?;
    let (theta, noise_weights) = if variant.has_noise_layer() {
        let nm = model.noise_matrix();
        (Some(nm.theta()), Some(nm.weights().clone()))
    } else {
        (None, None)
    };
    Ok((
        TrialResult {
            variant,
            seed,
            clean_size: data.clean_len,
            noisy_size,
            epochs: records,
            best_epoch,
            dev_f1,
            test_f1: test.overall.f1,
            test,
            theta,
            noise_weights,
        },
        model,
    ))
}
