use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::vocab::{Vocabulary, PAD_TOKEN};

/// Tokens on each side of the target.
pub const CONTEXT: usize = 3;
pub const WINDOW_LEN: usize = 2 * CONTEXT + 1;

pub type Window = [usize; WINDOW_LEN];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindowError {
    #[error("cannot build a window over an empty sentence")]
    EmptySentence,
    #[error("target {target} outside sentence of length {len}")]
    OutOfRange { target: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Clean,
    Noisy,
}

/// A target token with its context and whichever labels are known for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowExample {
    pub tokens: Window,
    pub clean_label: Option<usize>,
    pub noisy_label: Option<usize>,
    pub source: Source,
}

/// Surface forms of the window around `target`, padded at sentence edges.
pub fn build_window<S: AsRef<str>>(
    sentence: &[S],
    target: usize,
) -> Result<[&str; WINDOW_LEN], WindowError> {
    if sentence.is_empty() {
        return Err(WindowError::EmptySentence);
    }
    if target >= sentence.len() {
        return Err(WindowError::OutOfRange {
            target,
            len: sentence.len(),
        });
    }
    let mut out = [PAD_TOKEN; WINDOW_LEN];
    for (slot, item) in out.iter_mut().enumerate() {
        let pos = target as isize + slot as isize - CONTEXT as isize;
        if pos >= 0 && (pos as usize) < sentence.len() {
            *item = sentence[pos as usize].as_ref();
        }
    }
    Ok(out)
}

/// Vocabulary ids for every window of a sentence, in token order.
pub fn sentence_windows<S: AsRef<str>>(vocab: &Vocabulary, sentence: &[S]) -> Vec<Window> {
    let ids: Vec<usize> = sentence.iter().map(|t| vocab.lookup(t.as_ref())).collect();
    (0..ids.len())
        .map(|target| {
            let mut w = [vocab.pad(); WINDOW_LEN];
            for (slot, id) in w.iter_mut().enumerate() {
                let pos = target as isize + slot as isize - CONTEXT as isize;
                if pos >= 0 && (pos as usize) < ids.len() {
                    *id = ids[pos as usize];
                }
            }
            w
        })
        .collect()
}
