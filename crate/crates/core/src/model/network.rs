use rand::Rng;
use serde::{Deserialize, Serialize};

use super::noise::NoiseMatrix;
use super::window::{Window, CONTEXT, WINDOW_LEN};
use crate::tensor::{Graph, ParamId, ParamSet, Tensor, TensorError, Var};

/// How the BiLSTM states of a window are reduced to one feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pooling {
    /// Last forward state concatenated with the last backward state.
    #[default]
    FinalStates,
    /// Forward and backward states at the target position.
    Center,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDims {
    pub vocab_size: usize,
    pub embedding_dim: usize,
    pub state_size: usize,
    pub dense_size: usize,
    pub classes: usize,
    pub cleaner_size: usize,
}

impl ModelDims {
    pub fn feature_size(&self) -> usize {
        2 * self.state_size
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct LstmIds {
    input: ParamId,
    recurrent: ParamId,
    bias: ParamId,
}

/// Parameter handles of the cleaning network: a linear projection of the
/// window features followed by a linear combiner over `[projection, noisy
/// one-hot]`, a skip connection from the noisy label and clipping to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CleaningNetwork {
    pub projection: ParamId,
    pub projection_bias: ParamId,
    pub combiner: ParamId,
    pub combiner_bias: ParamId,
}

/// Selects the channel applied on top of the base distribution.
#[derive(Debug, Clone, Copy)]
pub enum NoiseLayer<'a> {
    /// `θ = softmax(b)` from the model's own trainable weights.
    Learned,
    /// A constant channel matrix, outside the graph's trainable set.
    Fixed(&'a Tensor),
}

/// Window classifier: embeddings → BiLSTM → dense ReLU → softmax, plus the
/// noise layer and cleaning network that share its weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    dims: ModelDims,
    pooling: Pooling,
    params: ParamSet,
    embedding: ParamId,
    forward: LstmIds,
    backward: LstmIds,
    dense: ParamId,
    dense_bias: ParamId,
    output: ParamId,
    noise: ParamId,
    cleaner: CleaningNetwork,
}

const EVAL_CHUNK: usize = 128;

impl Classifier {
    /// Fresh model. Weights are Glorot-uniform, biases zero except the LSTM
    /// forget gates (one), the noise weights start at the identity and the
    /// cleaner combiner at zero so the cleaner initially returns its input.
    pub fn new<R: Rng>(
        dims: ModelDims,
        pooling: Pooling,
        embeddings: Tensor,
        trainable_embeddings: bool,
        rng: &mut R,
    ) -> Result<Self, TensorError> {
        if embeddings.shape() != [dims.vocab_size, dims.embedding_dim] {
            return Err(TensorError::ShapeMismatch {
                op: "Classifier::new",
                lhs: embeddings.shape().to_vec(),
                rhs: vec![dims.vocab_size, dims.embedding_dim],
            });
        }
        let (e, h, d, k, c) = (
            dims.embedding_dim,
            dims.state_size,
            dims.dense_size,
            dims.classes,
            dims.cleaner_size,
        );
        let mut params = ParamSet::new();
        let embedding = params.add("embedding", embeddings, trainable_embeddings);
        let lstm = |params: &mut ParamSet, prefix: &str, rng: &mut R| {
            let mut bias = Tensor::zeros(&[1, 4 * h]);
            bias.data_mut()[h..2 * h].fill(1.0);
            LstmIds {
                input: params.add(format!("{prefix}.input"), glorot(rng, e, 4 * h), true),
                recurrent: params.add(format!("{prefix}.recurrent"), glorot(rng, h, 4 * h), true),
                bias: params.add(format!("{prefix}.bias"), bias, true),
            }
        };
        let forward = lstm(&mut params, "lstm_fwd", rng);
        let backward = lstm(&mut params, "lstm_bwd", rng);
        let dense = params.add("dense", glorot(rng, 2 * h, d), true);
        let dense_bias = params.add("dense.bias", Tensor::zeros(&[1, d]), true);
        let output = params.add("output", glorot(rng, d, k), true);
        let noise = params.add("noise.b", Tensor::identity(k), true);
        let cleaner = CleaningNetwork {
            projection: params.add("cleaner.projection", glorot(rng, 2 * h, c), true),
            projection_bias: params.add("cleaner.projection.bias", Tensor::zeros(&[1, c]), true),
            combiner: params.add("cleaner.combiner", Tensor::zeros(&[c + k, k]), true),
            combiner_bias: params.add("cleaner.combiner.bias", Tensor::zeros(&[1, k]), true),
        };
        Ok(Classifier {
            dims,
            pooling,
            params,
            embedding,
            forward,
            backward,
            dense,
            dense_bias,
            output,
            noise,
            cleaner,
        })
    }

    pub fn dims(&self) -> &ModelDims {
        &self.dims
    }

    pub fn pooling(&self) -> Pooling {
        self.pooling
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamSet {
        &mut self.params
    }

    /// Replaces all parameter values, e.g. with a best-epoch snapshot.
    pub fn restore(&mut self, snapshot: ParamSet) {
        debug_assert_eq!(snapshot.len(), self.params.len());
        self.params = snapshot;
    }

    pub fn noise_param(&self) -> ParamId {
        self.noise
    }

    pub fn cleaner(&self) -> CleaningNetwork {
        self.cleaner
    }

    pub fn embedding_param(&self) -> ParamId {
        self.embedding
    }

    pub fn noise_matrix(&self) -> NoiseMatrix {
        NoiseMatrix::new(self.params.value(self.noise).clone()).expect("noise weights are square")
    }

    pub fn set_noise_weights(&mut self, b: &Tensor) -> Result<(), TensorError> {
        let k = self.dims.classes;
        if b.shape() != [k, k] {
            return Err(TensorError::ShapeMismatch {
                op: "set_noise_weights",
                lhs: b.shape().to_vec(),
                rhs: vec![k, k],
            });
        }
        *self.params.value_mut(self.noise) = b.clone();
        Ok(())
    }

    /// Parameters consumed by the prediction path (everything except the
    /// noise layer and the cleaner).
    pub fn base_param_ids(&self) -> Vec<ParamId> {
        let c = self.cleaner;
        let excluded = [
            self.noise,
            c.projection,
            c.projection_bias,
            c.combiner,
            c.combiner_bias,
        ];
        self.params
            .ids()
            .filter(|id| !excluded.contains(id))
            .collect()
    }

    /// BiLSTM window features, `[batch, 2·state]`.
    pub fn features(&self, g: &mut Graph, windows: &[Window]) -> Result<Var, TensorError> {
        let table = g.param(self.embedding);
        let mut inputs = Vec::with_capacity(WINDOW_LEN);
        let mut ids = Vec::with_capacity(windows.len());
        for pos in 0..WINDOW_LEN {
            ids.clear();
            ids.extend(windows.iter().map(|w| w[pos]));
            inputs.push(g.gather_rows(table, &ids)?);
        }
        let fwd_states = self.run_lstm(g, self.forward, inputs.iter().copied())?;
        let mut bwd_states = self.run_lstm(g, self.backward, inputs.iter().rev().copied())?;
        bwd_states.reverse();
        let (f, b) = match self.pooling {
            Pooling::FinalStates => (fwd_states[WINDOW_LEN - 1], bwd_states[0]),
            Pooling::Center => (fwd_states[CONTEXT], bwd_states[CONTEXT]),
        };
        g.concat_cols(&[f, b])
    }

    fn run_lstm(
        &self,
        g: &mut Graph,
        ids: LstmIds,
        inputs: impl Iterator<Item = Var>,
    ) -> Result<Vec<Var>, TensorError> {
        let h_size = self.dims.state_size;
        let w_in = g.param(ids.input);
        let w_rec = g.param(ids.recurrent);
        let bias = g.param(ids.bias);
        let mut states = Vec::with_capacity(WINDOW_LEN);
        let mut carry: Option<(Var, Var)> = None;
        for x in inputs {
            let mut gates = g.matmul(x, w_in)?;
            if let Some((h, _)) = carry {
                let rec = g.matmul(h, w_rec)?;
                gates = g.add(gates, rec)?;
            }
            gates = g.add(gates, bias)?;
            let i_pre = g.slice_cols(gates, 0, h_size)?;
            let f_pre = g.slice_cols(gates, h_size, 2 * h_size)?;
            let c_pre = g.slice_cols(gates, 2 * h_size, 3 * h_size)?;
            let o_pre = g.slice_cols(gates, 3 * h_size, 4 * h_size)?;
            let i = g.sigmoid(i_pre);
            let f = g.sigmoid(f_pre);
            let cand = g.tanh(c_pre);
            let o = g.sigmoid(o_pre);
            let fresh = g.mul(i, cand)?;
            let c = match carry {
                Some((_, c_prev)) => {
                    let kept = g.mul(f, c_prev)?;
                    g.add(kept, fresh)?
                }
                None => fresh,
            };
            let c_act = g.tanh(c);
            let h = g.mul(o, c_act)?;
            states.push(h);
            carry = Some((h, c));
        }
        Ok(states)
    }

    /// Dense ReLU layer and softmax over classes on top of the features.
    fn head(&self, g: &mut Graph, features: Var) -> Result<Var, TensorError> {
        let w = g.param(self.dense);
        let b = g.param(self.dense_bias);
        let z = g.matmul(features, w)?;
        let z = g.add(z, b)?;
        let hidden = g.relu(z);
        let u = g.param(self.output);
        let logits = g.matmul(hidden, u)?;
        Ok(g.softmax_rows(logits))
    }

    /// `p(y | x)` for every window, `[batch, k]`.
    pub fn base_forward(&self, g: &mut Graph, windows: &[Window]) -> Result<Var, TensorError> {
        let feats = self.features(g, windows)?;
        self.head(g, feats)
    }

    /// `p(z = j | x) = Σ_i θ(i, j) p(y = i | x)` for every window.
    pub fn noisy_forward(
        &self,
        g: &mut Graph,
        windows: &[Window],
        layer: NoiseLayer<'_>,
    ) -> Result<Var, TensorError> {
        let clean = self.base_forward(g, windows)?;
        let theta = match layer {
            NoiseLayer::Learned => {
                let b = g.param(self.noise);
                g.softmax_rows(b)
            }
            NoiseLayer::Fixed(t) => g.constant(t.clone()),
        };
        g.matmul(clean, theta)
    }

    /// Cleaned label vectors `clip(W·[P·f, ẑ] + ẑ, 0, 1)` for windows with
    /// noisy labels `ẑ` (one-hot). With `detach_features` the cleaner's loss
    /// does not reach the BiLSTM.
    pub fn cleaning_forward(
        &self,
        g: &mut Graph,
        windows: &[Window],
        noisy_labels: &[usize],
        detach_features: bool,
    ) -> Result<Var, TensorError> {
        let k = self.dims.classes;
        if noisy_labels.len() != windows.len() {
            return Err(TensorError::Invalid {
                op: "cleaning_forward",
                msg: format!(
                    "{} labels for {} windows",
                    noisy_labels.len(),
                    windows.len()
                ),
            });
        }
        let onehot = g.constant(one_hot(noisy_labels, k)?);
        let mut feats = self.features(g, windows)?;
        if detach_features {
            feats = g.constant(g.value(feats).clone());
        }
        let c = self.cleaner;
        let proj_w = g.param(c.projection);
        let proj_b = g.param(c.projection_bias);
        let proj = g.matmul(feats, proj_w)?;
        let proj = g.add(proj, proj_b)?;
        let joined = g.concat_cols(&[proj, onehot])?;
        let comb_w = g.param(c.combiner);
        let comb_b = g.param(c.combiner_bias);
        let mixed = g.matmul(joined, comb_w)?;
        let mixed = g.add(mixed, comb_b)?;
        let skip = g.add(mixed, onehot)?;
        Ok(g.clip(skip, 0.0, 1.0))
    }

    /// Clean-label distributions without recording gradients.
    pub fn predict_proba(&self, windows: &[Window]) -> Tensor {
        self.eval_chunks(windows, |m, g, w| m.base_forward(g, w))
    }

    /// Noisy-label distributions through the learned noise layer.
    pub fn noisy_proba(&self, windows: &[Window]) -> Tensor {
        self.eval_chunks(windows, |m, g, w| {
            m.noisy_forward(g, w, NoiseLayer::Learned)
        })
    }

    /// Argmax of [`Classifier::predict_proba`]; ties go to the lowest class
    /// index. The noise layer and cleaner take no part.
    pub fn predict(&self, windows: &[Window]) -> Vec<usize> {
        let probs = self.predict_proba(windows);
        (0..probs.rows()).map(|r| argmax(probs.row(r))).collect()
    }

    /// Hard labels from the cleaning network: its output renormalized to a
    /// distribution and reduced by argmax. An all-zero output keeps the
    /// noisy label.
    pub fn clean_labels(
        &self,
        windows: &[Window],
        noisy_labels: &[usize],
    ) -> Result<Vec<usize>, TensorError> {
        let mut out = Vec::with_capacity(windows.len());
        for (w, z) in windows
            .chunks(EVAL_CHUNK)
            .zip(noisy_labels.chunks(EVAL_CHUNK))
        {
            let mut g = Graph::new(&self.params);
            let v = self.cleaning_forward(&mut g, w, z, true)?;
            let t = g.value(v);
            for (r, &noisy) in z.iter().enumerate() {
                let row = t.row(r);
                let total: f64 = row.iter().sum();
                if total > 0.0 {
                    let dist: Vec<f64> = row.iter().map(|x| x / total).collect();
                    out.push(argmax(&dist));
                } else {
                    out.push(noisy);
                }
            }
        }
        Ok(out)
    }

    fn eval_chunks<F>(&self, windows: &[Window], f: F) -> Tensor
    where
        F: Fn(&Self, &mut Graph, &[Window]) -> Result<Var, TensorError>,
    {
        let k = self.dims.classes;
        let mut data = Vec::with_capacity(windows.len() * k);
        for chunk in windows.chunks(EVAL_CHUNK) {
            let mut g = Graph::new(&self.params);
            let v = f(self, &mut g, chunk).expect("model shapes are consistent");
            data.extend_from_slice(g.value(v).data());
        }
        Tensor::from_vec(&[windows.len(), k], data).expect("k columns per window")
    }
}

/// Index of the largest entry; the first one wins ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub fn one_hot(labels: &[usize], k: usize) -> Result<Tensor, TensorError> {
    let mut t = Tensor::zeros(&[labels.len(), k]);
    for (r, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(TensorError::Invalid {
                op: "one_hot",
                msg: format!("label {l} out of range for {k} classes"),
            });
        }
        t.set(r, l, 1.0);
    }
    Ok(t)
}

fn glorot<R: Rng>(rng: &mut R, fan_in: usize, fan_out: usize) -> Tensor {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let data = (0..fan_in * fan_out)
        .map(|_| rng.gen_range(-limit..limit))
        .collect();
    Tensor::from_vec(&[fan_in, fan_out], data).expect("glorot shape")
}
