//! Pass/fail bands applied by `--assert`.
//!
//! | indicator | band |
//! |---|---|
//! | `P` | `[49, 51]` % |
//! | `dP` | ideal `50 / sqrt(n*m)` % +- 0.5 |
//! | `T` mean | `N/2 +- 3 sqrt(N) / 2` |
//! | `dT` | `[0.8, 1.2] * sqrt(N) / 2` (binomial spread of each `T_j`) |
//! | `D_KL(P^e, P^t)` | `< max(0.01, 20 / N)` |
//! | `|d_byte - 85.33|` | `< 1.5 * max(1, sqrt(2000 / N))` |
//! | mean JS (flip) | `> 0` |
//!
//! Sweep cells use the same bands for `P`, `D_KL`, the byte gap and the
//! flip JS mean.

use serde::{Deserialize, Serialize};

use crate::stats::report::{CollisionReport, DiffusionReport, Evaluation, UniformReport};
use crate::stats::sweep::StabilityCell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl Check {
    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            lo,
            hi,
            pass: value >= lo && value <= hi,
        }
    }

    fn optional(name: &str, value: Option<f64>, lo: f64, hi: f64) -> Self {
        match value {
            Some(v) => Self::within(name, v, lo, hi),
            None => Self {
                name: name.to_string(),
                value: f64::NAN,
                lo,
                hi,
                pass: false,
            },
        }
    }
}

pub fn diffusion_checks(r: &DiffusionReport) -> Vec<Check> {
    let ideal = 50.0 / (r.output_bits as f64).sqrt();
    vec![
        Check::within("P (%)", r.mean_changed_prob, 49.0, 51.0),
        Check::optional("dP (%)", r.std_changed_prob, ideal - 0.5, ideal + 0.5),
    ]
}

pub fn uniform_checks(r: &UniformReport) -> Vec<Check> {
    let n = r.trials as f64;
    let half = n / 2.0;
    let spread = n.sqrt() / 2.0;
    vec![
        Check::within("T mean", r.mean, half - 3.0 * spread, half + 3.0 * spread),
        Check::optional("dT", r.std, 0.8 * spread, 1.2 * spread),
    ]
}

pub fn collision_checks(r: &CollisionReport) -> Vec<Check> {
    let n = r.trials as f64;
    vec![
        Check::within("D_KL", r.kl, 0.0, (20.0 / n).max(0.01)),
        Check::within(
            "|d_byte - 85.33|",
            r.byte_diff_gap,
            0.0,
            1.5 * (2000.0 / n).sqrt().max(1.0),
        ),
    ]
}

pub fn evaluation_checks(e: &Evaluation) -> Vec<Check> {
    let mut out = diffusion_checks(&e.diffusion);
    out.extend(uniform_checks(&e.uniform));
    out.extend(collision_checks(&e.collision));
    if let Some(s) = &e.sensitivity {
        out.push(Check::within(
            "mean JS (flip)",
            s.js_means[0],
            f64::MIN_POSITIVE,
            1.0,
        ));
    }
    out
}

pub fn cell_checks(c: &StabilityCell) -> Vec<Check> {
    let n = c.trials as f64;
    vec![
        Check::within("P (%)", c.mean_changed_prob, 49.0, 51.0),
        Check::within("D_KL", c.kl, 0.0, (20.0 / n).max(0.01)),
        Check::within(
            "|d_byte - 85.33|",
            c.byte_diff_gap,
            0.0,
            1.5 * (2000.0 / n).sqrt().max(1.0),
        ),
        Check::within("mean JS (flip)", c.js_means[0], f64::MIN_POSITIVE, 1.0),
    ]
}
