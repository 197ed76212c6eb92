//! Theoretical hit-count distribution and byte-difference reference.
//!
//! Two independent uniform digests agree on a given byte with probability
//! `1/256`, so the number of agreeing bytes out of `g` is binomial.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Reference mean absolute byte difference, rounded to two decimals.
pub const BYTE_DIFF_REFERENCE: f64 = 85.33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialExpectation {
    /// `P^t(w)` for `w = 0..=g`.
    pub probabilities: Vec<f64>,
    /// `round(N * P^t(w))`.
    pub counts: Vec<u64>,
}

/// Expected hit histogram for `g` bytes over `trials` experiments.
pub fn binomial_expected(g: usize, trials: u64) -> Result<BinomialExpectation> {
    if g == 0 || trials == 0 {
        return Err(invalid("binomial expectation needs g >= 1 and N >= 1"));
    }
    let hit = 1.0 / 256.0;
    let miss: f64 = 255.0 / 256.0;
    let mut probabilities = Vec::with_capacity(g + 1);
    let mut p = miss.powi(g as i32);
    for w in 0..=g {
        probabilities.push(p);
        p *= (g - w) as f64 / (w + 1) as f64 * (hit / miss);
    }
    let counts = probabilities
        .iter()
        .map(|&p| (trials as f64 * p).round() as u64)
        .collect();
    Ok(BinomialExpectation {
        probabilities,
        counts,
    })
}

/// Exact `E|X - Y|` for independent uniform bytes: `(256^2 - 1) / (3 * 256)`.
pub fn byte_diff_theory() -> f64 {
    65535.0 / 768.0
}
