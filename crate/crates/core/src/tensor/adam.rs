use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ParamSet, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimError {
    #[error("non-finite gradient in parameter `{0}`")]
    NonFiniteGradient(String),
    #[error("optimizer state has {state} slots but parameter set has {params}")]
    Mismatch { state: usize, params: usize },
}

/// Adam with bias correction.
///
/// Only parameters that received a gradient since the last update are
/// stepped; each keeps its own bias-correction counter. A parameter that sits
/// out of a backward pass (the noise weights during a clean epoch, say) is
/// therefore left exactly where it is.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub config: AdamConfig,
    pub first_moment: Vec<Tensor>,
    pub second_moment: Vec<Tensor>,
    param_steps: Vec<u64>,
    step_count: u64,
}

impl AdamState {
    pub fn new(config: AdamConfig, params: &ParamSet) -> Self {
        let zeros: Vec<Tensor> = params
            .iter()
            .map(|(_, p)| Tensor::zeros(p.value.shape()))
            .collect();
        AdamState {
            config,
            first_moment: zeros.clone(),
            second_moment: zeros,
            param_steps: vec![0; params.len()],
            step_count: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Applies one update to every trainable parameter holding a gradient,
    /// then zeroes all gradients.
    pub fn step(&mut self, params: &mut ParamSet) -> Result<(), OptimError> {
        if params.len() != self.first_moment.len() {
            return Err(OptimError::Mismatch {
                state: self.first_moment.len(),
                params: params.len(),
            });
        }
        for id in params.ids() {
            let p = params.get(id);
            if p.requires_grad && p.has_grad() {
                if let Some(g) = params.grad_slot(id) {
                    if !g.all_finite() {
                        return Err(OptimError::NonFiniteGradient(p.name.clone()));
                    }
                }
            }
        }

        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        for id in params.ids() {
            let i = id.index();
            let (trainable, touched) = {
                let p = params.get(id);
                (p.requires_grad, p.has_grad())
            };
            if !trainable || !touched {
                continue;
            }
            let grad = params
                .grad_slot(id)
                .expect("touched parameter has a gradient")
                .clone();
            self.param_steps[i] += 1;
            let t = self.param_steps[i] as i32;
            let bc1 = 1.0 - beta1.powi(t);
            let bc2 = 1.0 - beta2.powi(t);
            let m = self.first_moment[i].data_mut();
            let v = self.second_moment[i].data_mut();
            let w = params.value_mut(id).data_mut();
            for j in 0..w.len() {
                let gj = grad.data()[j];
                m[j] = beta1 * m[j] + (1.0 - beta1) * gj;
                v[j] = beta2 * v[j] + (1.0 - beta2) * gj * gj;
                let m_hat = m[j] / bc1;
                let v_hat = v[j] / bc2;
                w[j] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        self.step_count += 1;
        params.zero_grad();
        Ok(())
    }
}
