//! Noisy-label training for windowed token classification.
//!
//! A BiLSTM window classifier is trained on a small clean set together with
//! a larger automatically annotated set. The noisy examples pass through a
//! learned row-stochastic noise layer that maps clean-label probabilities to
//! observed-label probabilities; the layer is dropped at prediction time.

pub mod annotate;
pub mod eval;
pub mod io;
pub mod model;
pub mod rng;
pub mod tensor;
pub mod train;
