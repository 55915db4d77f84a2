use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::substream;
use crate::tensor::Tensor;

pub const PAD_TOKEN: &str = "<PAD>";
pub const UNK_TOKEN: &str = "<UNK>";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VocabError {
    #[error("duplicate word `{0}`")]
    Duplicate(String),
    #[error("embedding table has {rows} rows for a vocabulary of {vocab}")]
    TableSize { rows: usize, vocab: usize },
}

/// Word list with `PAD` and `UNK` appended after the regular entries.
///
/// Lookup is case-sensitive and falls back to the lowercased form before
/// mapping to `UNK`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new(words: Vec<String>) -> Result<Self, VocabError> {
        let mut index = HashMap::with_capacity(words.len() + 2);
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(VocabError::Duplicate(w.clone()));
            }
        }
        for special in [PAD_TOKEN, UNK_TOKEN] {
            if index.contains_key(special) {
                return Err(VocabError::Duplicate(special.to_string()));
            }
        }
        Ok(Vocabulary { words, index })
    }

    /// Number of rows including `PAD` and `UNK`.
    pub fn len(&self) -> usize {
        self.words.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pad(&self) -> usize {
        self.words.len()
    }

    pub fn unk(&self) -> usize {
        self.words.len() + 1
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, id: usize) -> &str {
        match id {
            i if i < self.words.len() => &self.words[i],
            i if i == self.pad() => PAD_TOKEN,
            _ => UNK_TOKEN,
        }
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn lookup(&self, word: &str) -> usize {
        if let Some(i) = self.get(word) {
            return i;
        }
        let lower = word.to_lowercase();
        if lower != word {
            if let Some(i) = self.get(&lower) {
                return i;
            }
        }
        self.unk()
    }
}

impl TryFrom<Vec<String>> for Vocabulary {
    type Error = VocabError;
    fn try_from(words: Vec<String>) -> Result<Self, Self::Error> {
        Vocabulary::new(words)
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.words
    }
}

/// Word vectors with `PAD` and `UNK` rows (zeros unless overwritten).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embeddings {
    pub vocab: Vocabulary,
    pub table: Tensor,
}

impl Embeddings {
    pub fn new(vocab: Vocabulary, table: Tensor) -> Result<Self, VocabError> {
        if table.rows() != vocab.len() {
            return Err(VocabError::TableSize {
                rows: table.rows(),
                vocab: vocab.len(),
            });
        }
        Ok(Embeddings { vocab, table })
    }

    /// Seeded uniform(-1, 1) vectors standing in for pretrained ones.
    pub fn random(words: Vec<String>, dim: usize, seed: u64) -> Result<Self, VocabError> {
        let vocab = Vocabulary::new(words)?;
        let mut rng = substream(seed, "embeddings", 0);
        let mut table = Tensor::zeros(&[vocab.len(), dim]);
        let regular = vocab.pad() * dim;
        for v in &mut table.data_mut()[..regular] {
            *v = rng.gen_range(-1.0..1.0);
        }
        Embeddings::new(vocab, table)
    }

    pub fn dim(&self) -> usize {
        self.table.cols()
    }
}
