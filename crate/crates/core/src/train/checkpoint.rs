use serde::{Deserialize, Serialize};

use super::Variant;
use crate::io::Corpus;
use crate::model::{sentence_windows, Classifier, LabelSet, Vocabulary};

/// A trained model with everything needed to label new text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub variant: Variant,
    pub seed: u64,
    pub labels: LabelSet,
    pub vocabulary: Vocabulary,
    pub model: Classifier,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Predicted labels for every sentence of `corpus`.
    pub fn predict(&self, corpus: &Corpus) -> Vec<Vec<usize>> {
        corpus
            .sentences()
            .map(|s| {
                self.model
                    .predict(&sentence_windows(&self.vocabulary, &s.tokens))
            })
            .collect()
    }
}
