//! Statistical evaluation: avalanche, per-position uniformity, byte
//! collisions, distribution sensitivity and the coin-angle sweep.

pub mod binomial;
pub mod checks;
pub mod divergence;
pub mod output;
pub mod perturb;
pub mod report;
pub mod source;
pub mod sweep;
pub mod trials;

pub use binomial::{binomial_expected, byte_diff_theory, BinomialExpectation, BYTE_DIFF_REFERENCE};
pub use divergence::{js_divergence, kl_divergence};
pub use perturb::{perturb, ModificationKind};
pub use report::{
    collision_test, diffusion_confusion, evaluate, sensitivity_test, uniform_distribution,
    CollisionReport, DiffusionReport, Evaluation, SensitivityReport, UniformReport,
};
pub use source::{Dataset, MessageSource, DEFAULT_SYNTHETIC_BITS};
pub use sweep::{stability_sweep, stability_sweep_with, GridSpec, StabilityCell, StabilityGrid};
pub use trials::{run_trials, trial_rng, TrialConfig, TrialRecord, TrialSet};
