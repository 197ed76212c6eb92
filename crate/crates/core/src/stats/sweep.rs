//! Coin-angle stability sweep.
//!
//! Both coin angles range over `k * pi / c` for `k = 1..c-1`. Every cell
//! reuses the base config's seed, so all cells see the same messages and
//! differ only in the walk.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::params::{pi_fraction, ParamDescriptor, SCHEMA_VERSION};
use crate::stats::report::{evaluate, Evaluation};
use crate::stats::source::SourceDescriptor;
use crate::stats::trials::TrialConfig;

pub const DEFAULT_DIVISIONS: u32 = 30;
pub const DEFAULT_CELL_TRIALS: usize = 2048;

/// Angle grid: the same `k` values on both axes, angle `k * pi / (2c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of subintervals `c` of `(0, pi/2)`.
    pub divisions: u32,
    /// Interior endpoints used, `0 < k < c`.
    pub ks: Vec<u32>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::with_step(DEFAULT_DIVISIONS, 1).expect("default grid is valid")
    }
}

impl GridSpec {
    /// `k = step, 2*step, ...` below `divisions`.
    pub fn with_step(divisions: u32, step: u32) -> Result<Self> {
        if step == 0 {
            return Err(invalid("grid step must be positive"));
        }
        Self::new(
            divisions,
            (step..divisions).step_by(step as usize).collect(),
        )
    }

    pub fn new(divisions: u32, ks: Vec<u32>) -> Result<Self> {
        if divisions < 2 {
            return Err(invalid("need at least two subintervals"));
        }
        if ks.is_empty() || ks.iter().any(|&k| k == 0 || k >= divisions) {
            return Err(invalid(format!(
                "grid indices must lie in 1..{divisions} and be non-empty"
            )));
        }
        Ok(Self { divisions, ks })
    }

    /// `k * pi / (2c)`.
    pub fn angle(&self, k: u32) -> f64 {
        pi_fraction(k, 2 * self.divisions)
    }

    pub fn cells(&self) -> usize {
        self.ks.len() * self.ks.len()
    }
}

/// Indicators of one `(theta0, theta1)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCell {
    pub k0: u32,
    pub k1: u32,
    pub theta0: f64,
    pub theta1: f64,
    pub trials: usize,
    /// Mean JS divergence for flip, insert, delete.
    pub js_means: [f64; 3],
    pub mean_changed_prob: f64,
    pub std_changed_prob: Option<f64>,
    pub uniform_mean: f64,
    pub uniform_std: Option<f64>,
    pub kl: f64,
    pub mean_abs_byte_diff: f64,
    pub byte_diff_gap: f64,
}

impl StabilityCell {
    fn from_evaluation(k0: u32, k1: u32, cfg: &TrialConfig, e: &Evaluation) -> Self {
        let js_means = e
            .sensitivity
            .as_ref()
            .map(|s| s.js_means)
            .expect("sweep evaluates sensitivity");
        Self {
            k0,
            k1,
            theta0: cfg.params.theta0,
            theta1: cfg.params.theta1,
            trials: e.trials,
            js_means,
            mean_changed_prob: e.diffusion.mean_changed_prob,
            std_changed_prob: e.diffusion.std_changed_prob,
            uniform_mean: e.uniform.mean,
            uniform_std: e.uniform.std,
            kl: e.collision.kl,
            mean_abs_byte_diff: e.collision.mean_abs_byte_diff,
            byte_diff_gap: e.collision.byte_diff_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityGrid {
    pub schema_version: u32,
    /// Base parameters; the coin angles are overridden per cell.
    pub params: ParamDescriptor,
    pub seed: u64,
    pub source: SourceDescriptor,
    pub grid: GridSpec,
    /// Row-major in `theta0`, then `theta1`.
    pub cells: Vec<StabilityCell>,
}

impl StabilityGrid {
    pub fn cell(&self, k0: u32, k1: u32) -> Option<&StabilityCell> {
        self.cells.iter().find(|c| c.k0 == k0 && c.k1 == k1)
    }
}

/// Config of one cell.
pub fn cell_config(grid: &GridSpec, base: &TrialConfig, k0: u32, k1: u32) -> TrialConfig {
    let mut cfg = base.clone();
    cfg.params = base.params.with_angles(grid.angle(k0), grid.angle(k1));
    cfg
}

/// Runs every cell, calling `on_cell` as each finishes.
pub fn stability_sweep_with(
    grid: &GridSpec,
    base: &TrialConfig,
    mut on_cell: impl FnMut(&StabilityCell),
) -> Result<StabilityGrid> {
    base.validate()?;
    let mut cells = Vec::with_capacity(grid.cells());
    for &k0 in &grid.ks {
        for &k1 in &grid.ks {
            let cfg = cell_config(grid, base, k0, k1);
            let e = evaluate(&cfg, true)?;
            let cell = StabilityCell::from_evaluation(k0, k1, &cfg, &e);
            on_cell(&cell);
            cells.push(cell);
        }
    }
    Ok(StabilityGrid {
        schema_version: SCHEMA_VERSION,
        params: base.params.descriptor(),
        seed: base.seed,
        source: base.source.descriptor(),
        grid: grid.clone(),
        cells,
    })
}

pub fn stability_sweep(grid: &GridSpec, base: &TrialConfig) -> Result<StabilityGrid> {
    stability_sweep_with(grid, base, |_| {})
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    use super::*;
    use crate::params::{HashParams, Instance};
    use crate::stats::source::MessageSource;

    #[test]
    fn grid_shapes() {
        let g = GridSpec::default();
        assert_eq!(g.ks.len(), 29);
        assert_eq!(g.cells(), 841);
        assert_eq!(g.angle(15), FRAC_PI_4);
        assert_eq!(g.angle(20), FRAC_PI_3);
        let g = GridSpec::with_step(30, 4).unwrap();
        assert_eq!(g.ks, vec![4, 8, 12, 16, 20, 24, 28]);
        let g = GridSpec::with_step(30, 5).unwrap();
        assert_eq!(g.ks, vec![5, 10, 15, 20, 25]);
        assert!(GridSpec::with_step(30, 0).is_err());
        assert!(GridSpec::new(30, vec![30]).is_err());
        assert!(GridSpec::new(30, vec![]).is_err());
    }

    #[test]
    fn standard_cell_matches_standard_run() {
        let params = HashParams {
            n: 9,
            ..Instance::P296.params()
        };
        let base = TrialConfig::new(params.with_angles(0.3, 0.4), 8, 5)
            .with_source(MessageSource::Synthetic { bits: 96 });
        let grid = GridSpec::new(30, vec![15, 20]).unwrap();
        let sweep = stability_sweep(&grid, &base).unwrap();
        assert_eq!(sweep.cells.len(), 4);

        let standard = TrialConfig { params, ..base };
        let e = evaluate(&standard, true).unwrap();
        let cell = sweep.cell(15, 20).unwrap();
        assert_eq!(cell.mean_changed_prob, e.diffusion.mean_changed_prob);
        assert_eq!(cell.kl, e.collision.kl);
        assert_eq!(cell.js_means, e.sensitivity.unwrap().js_means);
    }
}
