use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{row_softmax, Tensor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("noise weights must be square, got shape {0:?}")]
    NotSquare(Vec<usize>),
    #[error("noise weights contain non-finite values")]
    NonFinite,
}

/// Learnable noise-layer weights `b`; the channel `θ` is their row softmax.
///
/// `θ[i][j]` is the probability that a token whose true class is `i` is
/// observed with class `j`. Only `b` is stored, so `θ` cannot go stale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseMatrix {
    weights: Tensor,
}

impl NoiseMatrix {
    pub fn new(weights: Tensor) -> Result<Self, NoiseError> {
        let (r, c) = weights.matrix_dims();
        if weights.shape().len() != 2 || r != c {
            return Err(NoiseError::NotSquare(weights.shape().to_vec()));
        }
        if !weights.all_finite() {
            return Err(NoiseError::NonFinite);
        }
        Ok(NoiseMatrix { weights })
    }

    pub fn k(&self) -> usize {
        self.weights.rows()
    }

    pub fn weights(&self) -> &Tensor {
        &self.weights
    }

    pub fn theta(&self) -> Tensor {
        theta_from_b(&self.weights)
    }
}

/// `θ[i][j] = exp(b[i][j]) / Σ_l exp(b[i][l])`, evaluated with the row
/// maximum subtracted.
pub fn theta_from_b(b: &Tensor) -> Tensor {
    row_softmax(b)
}
