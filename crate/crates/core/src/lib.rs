//! Hash digests from parity-dependent controlled quantum walks with memory.
//!
//! A message drives a walker on an odd cycle: every 0 bit applies a walk
//! with one-step memory, every 1 bit a walk with two-step memory, each with
//! its own coin angle. The final position distribution, truncated to `l`
//! decimal digits per node and reduced mod `2^m`, is the digest.
//!
//! ```
//! use qwalk_hash::{hash, Instance};
//!
//! let digest = hash(b"", &Instance::P296.params()).unwrap();
//! assert_eq!(digest.to_hex(), "0".repeat(74));
//! ```
//!
//! [`stats`] holds the statistical harness (avalanche, uniformity,
//! collisions, sensitivity, coin-angle sweep).

pub mod bench;
pub mod error;
pub mod hash;
pub mod params;
pub mod stats;
pub mod vectors;
pub mod walk;

pub use error::{Error, Result};
pub use hash::{
    bits_from_bytes, digest_from_distribution, evolve, hamming, hash, hash_bits, initial_state,
    BitMessage, Digest,
};
pub use params::{standard_instance, HashParams, Instance, ParamDescriptor};
pub use walk::{
    build_step_unitary, coin_matrix, direction_determine_general, ifeven, probability_distribution,
    step, CoinMatrix, Memory, StepKind, WalkState, Walker,
};
