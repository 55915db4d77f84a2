use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Embeddings, VocabError, Vocabulary};
use crate::tensor::Tensor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("line {line}: expected {expected} values, found {found}")]
    Dimension {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{field}` is not a number")]
    NotANumber { line: usize, field: String },
    #[error("line {line}: {source}")]
    Vocabulary {
        line: usize,
        #[source]
        source: VocabError,
    },
    #[error("no vectors found")]
    Empty,
}

/// Parses `word v1 … vD` lines. `PAD` and `UNK` rows (zeros) are appended.
/// The dimension comes from `expected_dim` or the first line.
pub fn load_embeddings(
    text: &str,
    expected_dim: Option<usize>,
) -> Result<Embeddings, EmbeddingError> {
    let mut words = Vec::new();
    let mut data = Vec::new();
    let mut dim = expected_dim;
    let mut seen = std::collections::HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else { continue };
        let values: Vec<&str> = fields.collect();
        let d = *dim.get_or_insert(values.len());
        if values.len() != d || d == 0 {
            return Err(EmbeddingError::Dimension {
                line: line_no,
                expected: d,
                found: values.len(),
            });
        }
        for f in values {
            let v: f64 = f.parse().map_err(|_| EmbeddingError::NotANumber {
                line: line_no,
                field: f.to_string(),
            })?;
            data.push(v);
        }
        if !seen.insert(word.to_string()) {
            return Err(EmbeddingError::Vocabulary {
                line: line_no,
                source: VocabError::Duplicate(word.to_string()),
            });
        }
        words.push(word.to_string());
    }
    let dim = match dim {
        Some(d) if !words.is_empty() => d,
        _ => return Err(EmbeddingError::Empty),
    };
    data.extend(std::iter::repeat_n(0.0, 2 * dim));
    let vocab =
        Vocabulary::new(words).map_err(|source| EmbeddingError::Vocabulary { line: 0, source })?;
    let table = Tensor::from_vec(&[vocab.len(), dim], data).expect("rows × dim values");
    Ok(Embeddings::new(vocab, table).expect("one row per word"))
}

/// Regular words only; `PAD` and `UNK` are re-created by the loader.
pub fn write_embeddings(emb: &Embeddings) -> String {
    let mut out = String::new();
    for (i, w) in emb.vocab.words().iter().enumerate() {
        out.push_str(w);
        for v in emb.table.row(i) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appends_pad_and_unk() {
        let e = load_embeddings("the 0.1 0.2 0.3\ncat 1 2 3\n", None).unwrap();
        assert_eq!(e.vocab.len(), 4);
        assert_eq!(e.dim(), 3);
        assert_eq!(e.table.row(e.vocab.pad()), &[0.0; 3]);
        assert_eq!(e.table.row(e.vocab.unk()), &[0.0; 3]);
        assert_eq!(e.table.row(1), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn dimension_errors_name_the_line() {
        let err = load_embeddings("a 1 2\nb 1 2 3\n", None).unwrap_err();
        assert_eq!(
            err,
            EmbeddingError::Dimension {
                line: 2,
                expected: 2,
                found: 3
            }
        );
        assert!(matches!(
            load_embeddings("a 1 2\n", Some(3)),
            Err(EmbeddingError::Dimension { line: 1, .. })
        ));
        assert!(matches!(
            load_embeddings("a 1 x\n", None),
            Err(EmbeddingError::NotANumber { line: 1, .. })
        ));
        assert!(matches!(
            load_embeddings("a 1\na 2\n", None),
            Err(EmbeddingError::Vocabulary { line: 2, .. })
        ));
        assert_eq!(load_embeddings("\n", None), Err(EmbeddingError::Empty));
    }

    #[test]
    fn round_trip_is_exact() {
        let e = Embeddings::random(vec!["a".into(), "b".into(), "c".into()], 5, 9).unwrap();
        let back = load_embeddings(&write_embeddings(&e), Some(5)).unwrap();
        assert_eq!(back, e);
    }
}
