//! Seeded, order-independent trial execution.
//!
//! Every trial owns a ChaCha8 stream: the generator is keyed once from the
//! master seed (`ChaCha8Rng::seed_from_u64(seed)`) and trial `i` reads stream
//! number `i` from word position 0. A trial's randomness therefore depends
//! only on `(seed, i)`, never on scheduling, and trials can run on any number
//! of threads. Results are collected in trial-index order.
//!
//! Per trial the draws are, in order: the original message, the flip
//! position, the insert position, the inserted bit, the delete position.
//! All five are drawn even when only the flip pair is evaluated, so a
//! diffusion-only run and a full run see identical messages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::hash::{digest_from_distribution, final_distribution, Digest};
use crate::params::HashParams;
use crate::stats::divergence::js_divergence;
use crate::stats::source::MessageSource;

/// Everything that determines a statistical run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub params: HashParams,
    pub trials: usize,
    pub seed: u64,
    pub source: MessageSource,
}

impl TrialConfig {
    pub fn new(params: HashParams, trials: usize, seed: u64) -> Self {
        Self {
            params,
            trials,
            seed,
            source: MessageSource::default(),
        }
    }

    pub fn with_source(mut self, source: MessageSource) -> Self {
        self.source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(invalid("trial count must be positive"));
        }
        self.source.validate()
    }
}

/// Random generator for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub msg_bits: usize,
    pub flip_pos: usize,
    pub insert_pos: usize,
    pub insert_bit: bool,
    pub delete_pos: usize,
    /// `H(msg0), H(msg1)` and, with sensitivity, `H(msg2), H(msg3)`.
    pub digests: Vec<Digest>,
    /// `D_JS(P0, Pj)` for flip, insert, delete.
    pub js: Option<[f64; 3]>,
}

impl TrialRecord {
    pub fn original(&self) -> &Digest {
        &self.digests[0]
    }

    pub fn flipped(&self) -> &Digest {
        &self.digests[1]
    }
}

/// All records of one run, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    pub config: TrialConfig,
    pub records: Vec<TrialRecord>,
}

impl TrialSet {
    pub fn has_sensitivity(&self) -> bool {
        self.records.iter().all(|r| r.js.is_some())
    }
}

/// Runs one trial.
pub fn run_trial(cfg: &TrialConfig, index: usize, sensitivity: bool) -> Result<TrialRecord> {
    let mut rng = trial_rng(cfg.seed, index as u64);
    let msg = cfg.source.draw(&mut rng);
    let bits = msg.bits();
    let t = bits.len();
    if t == 0 {
        return Err(Error::EmptySource(format!(
            "trial {index} drew an empty message"
        )));
    }
    let flip_pos = rng.random_range(0..t);
    let insert_pos = rng.random_range(0..=t);
    let insert_bit = rng.random::<bool>();
    let delete_pos = rng.random_range(0..t);

    let params = &cfg.params;
    let p0 = final_distribution(bits.iter().copied(), params)?;
    let flipped = bits
        .iter()
        .enumerate()
        .map(|(i, &b)| if i == flip_pos { !b } else { b });
    let p1 = final_distribution(flipped, params)?;

    let mut digests = vec![
        digest_from_distribution(&p0, params)?,
        digest_from_distribution(&p1, params)?,
    ];
    let js = if sensitivity {
        let inserted = bits[..insert_pos]
            .iter()
            .copied()
            .chain(std::iter::once(insert_bit))
            .chain(bits[insert_pos..].iter().copied());
        let p2 = final_distribution(inserted, params)?;
        let deleted = bits[..delete_pos]
            .iter()
            .chain(&bits[delete_pos + 1..])
            .copied();
        let p3 = final_distribution(deleted, params)?;
        digests.push(digest_from_distribution(&p2, params)?);
        digests.push(digest_from_distribution(&p3, params)?);
        Some([
            js_divergence(&p0, &p1)?,
            js_divergence(&p0, &p2)?,
            js_divergence(&p0, &p3)?,
        ])
    } else {
        None
    };

    Ok(TrialRecord {
        index,
        msg_bits: t,
        flip_pos,
        insert_pos,
        insert_bit,
        delete_pos,
        digests,
        js,
    })
}

/// Runs all trials of `cfg` on the current rayon pool.
pub fn run_trials(cfg: &TrialConfig, sensitivity: bool) -> Result<TrialSet> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i, sensitivity))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialSet {
        config: cfg.clone(),
        records,
    })
}
