//! Timing helpers behind `qwhash bench`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hash::{digest_from_distribution, final_distribution, BitMessage};
use crate::params::HashParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub n: usize,
    pub bits: usize,
    /// Fastest of the repetitions, in seconds.
    pub seconds: f64,
}

/// Fixed pseudo-random message of `bits` bits.
pub fn bench_message(bits: usize) -> BitMessage {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    BitMessage::new((0..bits).map(|_| rng.random::<bool>()).collect())
}

/// Best-of-`reps` wall time for hashing `msg`.
pub fn time_hash(params: &HashParams, msg: &BitMessage, reps: usize) -> Result<f64> {
    if reps == 0 {
        return Err(invalid("need at least one repetition"));
    }
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let start = Instant::now();
        let prob = final_distribution(msg.bits().iter().copied(), params)?;
        let digest = digest_from_distribution(&prob, params)?;
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(digest);
        best = best.min(elapsed);
    }
    Ok(best)
}

pub fn bench_lengths(
    params: &HashParams,
    lengths: &[usize],
    reps: usize,
) -> Result<Vec<BenchPoint>> {
    lengths
        .iter()
        .map(|&bits| {
            if bits == 0 {
                return Err(invalid("message lengths must be positive"));
            }
            let msg = bench_message(bits);
            Ok(BenchPoint {
                n: params.n,
                bits,
                seconds: time_hash(params, &msg, reps)?,
            })
        })
        .collect()
}

/// Least-squares `(slope, intercept)` of `y` against `x`.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Peak resident set size of this process in KiB (Linux only).
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}
