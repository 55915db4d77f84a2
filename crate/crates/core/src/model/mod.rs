//! The window classifier, its noise layer and the cleaning network.

mod labels;
mod network;
mod noise;
mod vocab;
mod window;

pub use labels::{LabelError, LabelSet};
pub use network::{argmax, one_hot, Classifier, CleaningNetwork, ModelDims, NoiseLayer, Pooling};
pub use noise::{theta_from_b, NoiseError, NoiseMatrix};
pub use vocab::{Embeddings, VocabError, Vocabulary, PAD_TOKEN, UNK_TOKEN};
pub use window::{
    build_window, sentence_windows, Source, Window, WindowError, WindowExample, CONTEXT, WINDOW_LEN,
};
