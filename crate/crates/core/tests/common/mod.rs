#![allow(dead_code)]

use qwalk_hash::hash::step_kinds;
use qwalk_hash::walk::apply_dense;
use qwalk_hash::{build_step_unitary, initial_state, HashParams, WalkState};

/// Final state of the message walk, one dense matrix-vector product per bit.
pub fn dense_final_state(bits: &[bool], params: &HashParams) -> WalkState {
    let kinds = step_kinds(params).unwrap();
    let ops = [
        build_step_unitary(params.n, &kinds[0]).unwrap(),
        build_step_unitary(params.n, &kinds[1]).unwrap(),
    ];
    bits.iter().fold(initial_state(params).unwrap(), |s, &b| {
        apply_dense(&ops[b as usize], &s).unwrap()
    })
}

pub fn max_deviation(a: &WalkState, b: &WalkState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
