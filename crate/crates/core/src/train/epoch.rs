use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::TrainError;
use crate::model::{one_hot, Classifier, NoiseLayer, Window};
use crate::rng::substream;
use crate::tensor::{absolute_error, cross_entropy, AdamState, Graph};

/// Fresh uniform sample of `size` indices out of `0..n` for one epoch.
pub fn subsample_noisy(
    n: usize,
    size: usize,
    seed: u64,
    epoch: u64,
) -> Result<Vec<usize>, TrainError> {
    if size > n {
        return Err(TrainError::NoisyTooLarge {
            requested: size,
            available: n,
        });
    }
    let mut rng = substream(seed, "noisy-sample", epoch);
    Ok(index::sample(&mut rng, n, size).into_vec())
}

/// One pass over shuffled minibatches with cross-entropy against `labels`
/// and no noise layer. Returns the mean loss.
pub fn train_clean_epoch<R: Rng>(
    model: &mut Classifier,
    adam: &mut AdamState,
    windows: &[Window],
    labels: &[usize],
    batch_size: usize,
    rng: &mut R,
) -> Result<f64, TrainError> {
    run_epoch(
        model,
        adam,
        windows,
        labels,
        batch_size,
        rng,
        |m, g, w, y| {
            let p = m.base_forward(g, w)?;
            cross_entropy(g, p, y)
        },
    )
}

/// One pass with the noise layer on top of the base distribution, fitting
/// the observed noisy labels. With [`NoiseLayer::Learned`] the noise
/// weights are updated together with the shared base weights.
pub fn train_noisy_epoch<R: Rng>(
    model: &mut Classifier,
    adam: &mut AdamState,
    windows: &[Window],
    noisy_labels: &[usize],
    layer: NoiseLayer<'_>,
    batch_size: usize,
    rng: &mut R,
) -> Result<f64, TrainError> {
    run_epoch(
        model,
        adam,
        windows,
        noisy_labels,
        batch_size,
        rng,
        |m, g, w, z| {
            let p = m.noisy_forward(g, w, layer)?;
            cross_entropy(g, p, z)
        },
    )
}

/// Fits the cleaning network to map noisy labels to clean ones with an
/// absolute-error loss. The window features are treated as constants, so
/// only the cleaner's own weights move.
pub fn train_cleaner_epoch<R: Rng>(
    model: &mut Classifier,
    adam: &mut AdamState,
    windows: &[Window],
    noisy_labels: &[usize],
    clean_labels: &[usize],
    batch_size: usize,
    rng: &mut R,
) -> Result<f64, TrainError> {
    let k = model.dims().classes;
    let n = windows.len();
    if n == 0 {
        return Err(TrainError::EmptyData("cleaner"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut total = 0.0;
    for batch in order.chunks(batch_size) {
        let w: Vec<Window> = batch.iter().map(|&i| windows[i]).collect();
        let z: Vec<usize> = batch.iter().map(|&i| noisy_labels[i]).collect();
        let y: Vec<usize> = batch.iter().map(|&i| clean_labels[i]).collect();
        let (loss, grads) = {
            let mut g = Graph::new(model.params());
            let out = model.cleaning_forward(&mut g, &w, &z, true)?;
            let target = g.constant(one_hot(&y, k)?);
            let l = absolute_error(&mut g, out, target)?;
            (g.value(l).item(), g.backward(l)?)
        };
        total += loss * batch.len() as f64;
        model.params_mut().accumulate(&grads);
        adam.step(model.params_mut())?;
    }
    Ok(total / n as f64)
}

fn run_epoch<R, F>(
    model: &mut Classifier,
    adam: &mut AdamState,
    windows: &[Window],
    labels: &[usize],
    batch_size: usize,
    rng: &mut R,
    loss: F,
) -> Result<f64, TrainError>
where
    R: Rng,
    F: Fn(
        &Classifier,
        &mut Graph,
        &[Window],
        &[usize],
    ) -> Result<crate::tensor::Var, crate::tensor::TensorError>,
{
    let n = windows.len();
    if n == 0 {
        return Err(TrainError::EmptyData("epoch"));
    }
    debug_assert_eq!(labels.len(), n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut total = 0.0;
    let mut w = Vec::with_capacity(batch_size);
    let mut y = Vec::with_capacity(batch_size);
    for batch in order.chunks(batch_size) {
        w.clear();
        y.clear();
        w.extend(batch.iter().map(|&i| windows[i]));
        y.extend(batch.iter().map(|&i| labels[i]));
        let (value, grads) = {
            let mut g = Graph::new(model.params());
            let l = loss(model, &mut g, &w, &y)?;
            (g.value(l).item(), g.backward(l)?)
        };
        if !value.is_finite() {
            return Err(TrainError::NonFiniteLoss(value));
        }
        total += value * batch.len() as f64;
        model.params_mut().accumulate(&grads);
        adam.step(model.params_mut())?;
    }
    Ok(total / n as f64)
}
