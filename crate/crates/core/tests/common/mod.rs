//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// `(start, end, class)` of every maximal run of a non-null label, found by
/// scanning for label changes.
pub fn brute_spans(labels: &[usize], null: usize) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    let mut start = 0;
    for i in 1..=labels.len() {
        if i == labels.len() || labels[i] != labels[start] {
            if labels[start] != null {
                out.insert((start, i - 1, labels[start]));
            }
            start = i;
        }
    }
    out
}

/// Per-class `(tp, fp, fn)` by set intersection of span sets.
pub fn brute_counts(
    gold: &[Vec<usize>],
    pred: &[Vec<usize>],
    k: usize,
    null: usize,
) -> Vec<(u64, u64, u64)> {
    let mut counts = vec![(0, 0, 0); k];
    for (g, p) in gold.iter().zip(pred) {
        let gs = brute_spans(g, null);
        let ps = brute_spans(p, null);
        for s in gs.intersection(&ps) {
            counts[s.2].0 += 1;
        }
        for s in ps.difference(&gs) {
            counts[s.2].1 += 1;
        }
        for s in gs.difference(&ps) {
            counts[s.2].2 += 1;
        }
    }
    counts
}

pub fn prf(tp: u64, fp: u64, fn_: u64) -> (f64, f64, f64) {
    let p = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let r = if tp + fn_ == 0 {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    let f = if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    };
    (p, r, f)
}

pub fn softmax(v: &[f64]) -> Vec<f64> {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = v.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}

/// `p(z = j) = Σ_i θ(i, j) p(y = i)` term by term.
pub fn brute_noisy(p: &[f64], b: &[Vec<f64>]) -> Vec<f64> {
    let theta: Vec<Vec<f64>> = b.iter().map(|r| softmax(r)).collect();
    let k = p.len();
    let mut out = vec![0.0; k];
    for j in 0..k {
        for i in 0..k {
            out[j] += theta[i][j] * p[i];
        }
    }
    out
}

/// `(c_ij + α) / (Σ_j' c_ij' + kα)`.
pub fn smoothed_rows(counts: &[Vec<u64>], alpha: f64) -> Vec<Vec<f64>> {
    let k = counts.len();
    counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            row.iter()
                .map(|&c| (c as f64 + alpha) / (total as f64 + k as f64 * alpha))
                .collect()
        })
        .collect()
}
