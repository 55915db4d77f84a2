//! Corpus, embedding and configuration formats, plus the bundled toy data.

mod atomic;
mod config;
mod conll;
mod embeddings;
mod sample;
mod toy;

pub use atomic::write_atomic;
pub use config::{ConfigError, ExperimentConfig, NoiseSource};
pub use conll::{parse_conll, write_conll, ConllError, Corpus, Document, Sentence};
pub use embeddings::{load_embeddings, write_embeddings, EmbeddingError};
pub use sample::{sample_clean_subset, SampleError, SubsetSplit};
pub use toy::{
    generate_toy, toy_gazetteer, toy_vocabulary, ToyConfig, ToyCorpus, TOY_BLOCKLIST, TOY_GAZETTEER,
};
