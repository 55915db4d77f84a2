use rand::seq::SliceRandom;
use thiserror::Error;

use crate::rng::substream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("word budget must be positive")]
    ZeroBudget,
    #[error("word budget {budget} exceeds the {available} available tokens")]
    BudgetTooLarge { budget: usize, available: usize },
}

/// Sentence indices of a clean subset and of the remainder, both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSplit {
    pub clean: Vec<usize>,
    pub rest: Vec<usize>,
}

/// Draws whole sentences in a seeded random order until the accumulated
/// token count first reaches `budget`.
pub fn sample_clean_subset(
    sentence_lengths: &[usize],
    budget: usize,
    seed: u64,
) -> Result<SubsetSplit, SampleError> {
    if budget == 0 {
        return Err(SampleError::ZeroBudget);
    }
    let available: usize = sentence_lengths.iter().sum();
    if budget > available {
        return Err(SampleError::BudgetTooLarge { budget, available });
    }
    let mut order: Vec<usize> = (0..sentence_lengths.len()).collect();
    order.shuffle(&mut substream(seed, "clean-subset", 0));
    let mut taken = 0;
    let mut cut = 0;
    while taken < budget {
        taken += sentence_lengths[order[cut]];
        cut += 1;
    }
    let mut clean = order[..cut].to_vec();
    let mut rest = order[cut..].to_vec();
    clean.sort_unstable();
    rest.sort_unstable();
    Ok(SubsetSplit { clean, rest })
}
