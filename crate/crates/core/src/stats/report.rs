//! Indicator reports computed from a [`TrialSet`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::params::{ParamDescriptor, SCHEMA_VERSION};
use crate::stats::binomial::{binomial_expected, BinomialExpectation, BYTE_DIFF_REFERENCE};
use crate::stats::divergence::kl_divergence;
use crate::stats::source::SourceDescriptor;
use crate::stats::trials::{run_trials, TrialConfig, TrialSet};

/// Sample standard deviation (divisor `len - 1`); `None` below two samples.
pub fn sample_std(values: impl IntoIterator<Item = f64> + Clone) -> Option<f64> {
    let (count, sum) = values
        .clone()
        .into_iter()
        .fold((0usize, 0.0), |(c, s), v| (c + 1, s + v));
    if count < 2 {
        return None;
    }
    let mean = sum / count as f64;
    let ss: f64 = values.into_iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((ss / (count - 1) as f64).sqrt())
}

/// Avalanche indicators over the flip pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionReport {
    pub output_bits: usize,
    pub trials: usize,
    /// Mean changed bit number.
    pub mean_changed_bits: f64,
    /// Mean changed probability, percent.
    pub mean_changed_prob: f64,
    pub std_changed_bits: Option<f64>,
    /// Percent.
    pub std_changed_prob: Option<f64>,
    /// `(dP + |P - 50|) / 2`, percent.
    pub idc: Option<f64>,
    /// Per-trial Hamming distances.
    pub hamming: Vec<u32>,
}

impl DiffusionReport {
    pub fn from_trials(set: &TrialSet) -> Result<Self> {
        let hamming = set
            .records
            .iter()
            .map(|r| r.original().hamming(r.flipped()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_distances(
            set.config.params.output_bits(),
            hamming,
        ))
    }

    pub fn from_distances(output_bits: usize, hamming: Vec<u32>) -> Self {
        let nm = output_bits as f64;
        let trials = hamming.len();
        let mean_changed_bits = hamming.iter().map(|&b| b as f64).sum::<f64>() / trials as f64;
        let mean_changed_prob = mean_changed_bits / nm * 100.0;
        let std_changed_bits = sample_std(hamming.iter().map(|&b| b as f64));
        let std_changed_prob =
            sample_std(hamming.iter().map(|&b| b as f64 / nm)).map(|s| s * 100.0);
        let idc = std_changed_prob.map(|dp| (dp + (mean_changed_prob - 50.0).abs()) / 2.0);
        Self {
            output_bits,
            trials,
            mean_changed_bits,
            mean_changed_prob,
            std_changed_bits,
            std_changed_prob,
            idc,
            hamming,
        }
    }
}

/// Per-position flip counts over the flip pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformReport {
    pub output_bits: usize,
    pub trials: usize,
    /// `T_j` for positions `1..=n*m` (index 0 is position 1).
    pub flip_counts: Vec<u32>,
    pub mean: f64,
    /// Divisor `n*m - 1`.
    pub std: Option<f64>,
}

impl UniformReport {
    pub fn from_trials(set: &TrialSet) -> Result<Self> {
        let output_bits = set.config.params.output_bits();
        let mut flip_counts = vec![0u32; output_bits];
        for r in &set.records {
            for pos in r.original().diff_positions(r.flipped())? {
                flip_counts[pos - 1] += 1;
            }
        }
        let mean = flip_counts.iter().map(|&t| t as f64).sum::<f64>() / output_bits as f64;
        let std = sample_std(flip_counts.iter().map(|&t| t as f64));
        Ok(Self {
            output_bits,
            trials: set.records.len(),
            flip_counts,
            mean,
            std,
        })
    }
}

/// Byte-hit histogram against the binomial model, and mean byte difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    /// Bytes per digest.
    pub bytes: usize,
    pub trials: usize,
    /// `W^e(w)`, `w = 0..=g`.
    pub hits: Vec<u64>,
    pub expected: BinomialExpectation,
    /// `P^e(w) = W^e(w) / N`.
    pub experimental_probabilities: Vec<f64>,
    /// `D_KL(P^e || P^t)`, base 2.
    pub kl: f64,
    pub mean_abs_byte_diff: f64,
    pub reference_byte_diff: f64,
    /// `|mean_abs_byte_diff - reference_byte_diff|`.
    pub byte_diff_gap: f64,
    pub per_trial_hits: Vec<u32>,
    pub per_trial_byte_diff: Vec<f64>,
}

impl CollisionReport {
    pub fn from_trials(set: &TrialSet) -> Result<Self> {
        let pairs = set
            .records
            .iter()
            .map(|r| (r.original().to_bytes(), r.flipped().to_bytes()));
        Self::from_byte_pairs(pairs)
    }

    pub fn from_byte_pairs(pairs: impl IntoIterator<Item = (Vec<u8>, Vec<u8>)>) -> Result<Self> {
        let mut per_trial_hits = Vec::new();
        let mut per_trial_byte_diff = Vec::new();
        let mut bytes = None;
        for (a, b) in pairs {
            let g = *bytes.get_or_insert(a.len());
            if a.len() != g || b.len() != g || g == 0 {
                return Err(invalid("digest byte views differ in length"));
            }
            let hits = a.iter().zip(&b).filter(|(x, y)| x == y).count();
            let diff: u32 = a
                .iter()
                .zip(&b)
                .map(|(&x, &y)| (x as i32 - y as i32).unsigned_abs())
                .sum();
            per_trial_hits.push(hits as u32);
            per_trial_byte_diff.push(diff as f64 / g as f64);
        }
        let Some(bytes) = bytes else {
            return Err(invalid("collision test needs at least one trial"));
        };
        let trials = per_trial_hits.len();
        let mut hits = vec![0u64; bytes + 1];
        for &h in &per_trial_hits {
            hits[h as usize] += 1;
        }
        let expected = binomial_expected(bytes, trials as u64)?;
        let experimental_probabilities: Vec<f64> =
            hits.iter().map(|&w| w as f64 / trials as f64).collect();
        let kl = kl_divergence(&experimental_probabilities, &expected.probabilities)?;
        let mean_abs_byte_diff = per_trial_byte_diff.iter().sum::<f64>() / trials as f64;
        Ok(Self {
            bytes,
            trials,
            hits,
            expected,
            experimental_probabilities,
            kl,
            mean_abs_byte_diff,
            reference_byte_diff: BYTE_DIFF_REFERENCE,
            byte_diff_gap: (mean_abs_byte_diff - BYTE_DIFF_REFERENCE).abs(),
            per_trial_hits,
            per_trial_byte_diff,
        })
    }

    /// Hit counts with every `w >= limit` folded into the last bucket.
    pub fn grouped_hits(&self, limit: usize) -> Vec<u64> {
        group(&self.hits, limit)
    }

    pub fn grouped_expected(&self, limit: usize) -> Vec<u64> {
        group(&self.expected.counts, limit)
    }
}

fn group(counts: &[u64], limit: usize) -> Vec<u64> {
    let mut out: Vec<u64> = counts.iter().take(limit).copied().collect();
    out.resize(limit, 0);
    out.push(counts.iter().skip(limit).sum());
    out
}

/// One trial shown in full: the four digests and where they differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exhibit {
    pub trial: usize,
    /// Pretty hex of `H(msg0)..H(msg3)`.
    pub digests: Vec<String>,
    /// 1-based changed positions of `H(msgj)` against `H(msg0)`, j = 1..3.
    pub changed_positions: Vec<Vec<usize>>,
}

/// Distribution-level sensitivity to flip, insert and delete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub trials: usize,
    /// Mean `D_JS(P0, Pj)` for j = 1 (flip), 2 (insert), 3 (delete).
    pub js_means: [f64; 3],
    pub js_per_trial: Vec<[f64; 3]>,
    /// Per bit position, how many trials changed it under each condition.
    pub position_counts: Vec<[u32; 3]>,
    pub exhibit: Exhibit,
}

impl SensitivityReport {
    pub fn from_trials(set: &TrialSet) -> Result<Self> {
        if !set.has_sensitivity() || set.records.is_empty() {
            return Err(invalid("trial set was run without sensitivity data"));
        }
        let output_bits = set.config.params.output_bits();
        let mut sums = [0.0f64; 3];
        let mut js_per_trial = Vec::with_capacity(set.records.len());
        let mut position_counts = vec![[0u32; 3]; output_bits];
        for r in &set.records {
            let js = r.js.expect("checked above");
            for k in 0..3 {
                sums[k] += js[k];
                for pos in r.original().diff_positions(&r.digests[k + 1])? {
                    position_counts[pos - 1][k] += 1;
                }
            }
            js_per_trial.push(js);
        }
        let trials = set.records.len();
        let first = &set.records[0];
        let exhibit = Exhibit {
            trial: first.index,
            digests: first.digests.iter().map(|d| d.to_hex_pretty()).collect(),
            changed_positions: (1..4)
                .map(|k| first.original().diff_positions(&first.digests[k]))
                .collect::<Result<_>>()?,
        };
        Ok(Self {
            trials,
            js_means: sums.map(|s| s / trials as f64),
            js_per_trial,
            position_counts,
            exhibit,
        })
    }
}

/// All indicator families from one trial stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub schema_version: u32,
    pub params: ParamDescriptor,
    pub seed: u64,
    pub trials: usize,
    pub source: SourceDescriptor,
    pub diffusion: DiffusionReport,
    pub uniform: UniformReport,
    pub collision: CollisionReport,
    pub sensitivity: Option<SensitivityReport>,
}

impl Evaluation {
    pub fn from_trials(set: &TrialSet) -> Result<Self> {
        let cfg = &set.config;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            params: cfg.params.descriptor(),
            seed: cfg.seed,
            trials: set.records.len(),
            source: cfg.source.descriptor(),
            diffusion: DiffusionReport::from_trials(set)?,
            uniform: UniformReport::from_trials(set)?,
            collision: CollisionReport::from_trials(set)?,
            sensitivity: if set.has_sensitivity() {
                Some(SensitivityReport::from_trials(set)?)
            } else {
                None
            },
        })
    }
}

/// Runs the trials once and derives every indicator family from them.
pub fn evaluate(cfg: &TrialConfig, sensitivity: bool) -> Result<Evaluation> {
    Evaluation::from_trials(&run_trials(cfg, sensitivity)?)
}

pub fn diffusion_confusion(cfg: &TrialConfig) -> Result<DiffusionReport> {
    DiffusionReport::from_trials(&run_trials(cfg, false)?)
}

pub fn uniform_distribution(cfg: &TrialConfig) -> Result<UniformReport> {
    UniformReport::from_trials(&run_trials(cfg, false)?)
}

pub fn collision_test(cfg: &TrialConfig) -> Result<CollisionReport> {
    CollisionReport::from_trials(&run_trials(cfg, false)?)
}

pub fn sensitivity_test(cfg: &TrialConfig) -> Result<SensitivityReport> {
    SensitivityReport::from_trials(&run_trials(cfg, true)?)
}
