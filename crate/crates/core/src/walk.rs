//! Parity-dependent quantum walks with one- and two-step memory on a cycle.
//!
//! The walker lives on `n` nodes (odd, at least 3). Each node carries eight
//! internal registers packing the two remembered directions and the coin:
//!
//! ```text
//! j = 4*d2 + 2*d1 + c        amplitude index = 8*x + j
//! ```
//!
//! `d1` is the most recent direction (1 = right, 0 = left), `d2` the one
//! before it. A single step applies, in order, the coin on `c`, a
//! direction-determine permutation on `(d2, d1, c)` and a conditional shift
//! `x -> x + 2*d1 - 1 (mod n)` driven by the freshly written `d1`.
//!
//! Two step kinds exist:
//!
//! * [`Memory::One`]: `|d2, d1, c> -> |d2, c ^ 1 ^ d1, c>` (`d2` is a padding
//!   register and never changes)
//! * [`Memory::Two`]: `|d2, d1, c> -> |d1, c ^ d1 ^ d2, c>`
//!
//! Both are special cases of the generic parity rule in
//! [`direction_determine_general`].
//!
//! [`step`] evaluates a step as a gather over the two neighbours of each node
//! (two products and one sum per output amplitude, so `16` real-complex
//! multiplications and `8` additions per node). [`build_step_unitary`] builds
//! the same step as an explicit `8n x 8n` matrix product and exists to check
//! the gather tables.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// One complex amplitude.
pub type Amp = Complex64;

/// Registers per node.
pub const REGISTERS: usize = 8;

/// Tolerance on `sum |A|^2 = 1` accepted by [`WalkState::new`].
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Real symmetric coin `((cos t, sin t), (sin t, -cos t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CoinMatrix {
    #[inline]
    fn row(&self, r: usize) -> [f64; 2] {
        if r == 0 {
            [self.a, self.b]
        } else {
            [self.c, self.d]
        }
    }

    pub fn to_matrix(&self) -> DMatrix<Amp> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Amp::from(self.a),
                Amp::from(self.b),
                Amp::from(self.c),
                Amp::from(self.d),
            ],
        )
    }
}

/// Returns true when `theta` lies in the open interval `(0, pi/2)` used by
/// standard hash instances.
pub fn angle_in_standard_range(theta: f64) -> bool {
    theta > 0.0 && theta < FRAC_PI_2
}

/// Coin operator for angle `theta` (radians).
///
/// Any finite angle is accepted; angles outside `(0, pi/2)` are logged as a
/// warning since they give degenerate or reflected coins.
pub fn coin_matrix(theta: f64) -> Result<CoinMatrix> {
    if !theta.is_finite() {
        return Err(invalid(format!("coin angle must be finite, got {theta}")));
    }
    if !angle_in_standard_range(theta) {
        log::warn!("coin angle {theta} lies outside (0, pi/2)");
    }
    let (s, c) = theta.sin_cos();
    Ok(CoinMatrix {
        a: c,
        b: s,
        c: s,
        d: -c,
    })
}

/// `true` iff the number of zeros among `dirs` is even.
pub fn ifeven(dirs: &[bool]) -> Result<bool> {
    if dirs.is_empty() {
        return Err(invalid("ifeven needs at least one direction bit"));
    }
    let zeros = dirs.iter().filter(|&&d| !d).count();
    Ok(zeros % 2 == 0)
}

/// Generic parity direction rule for an `mlen`-step memory.
///
/// `dirs` is ordered oldest first (`d_m, ..., d_1`). Returns the shifted
/// memory `(d_{m-1}, ..., d_1, c ^ 1 ^ ifeven(d_m..d_1))` and the unchanged
/// coin bit.
pub fn direction_determine_general(
    mlen: usize,
    dirs: &[bool],
    c: bool,
) -> Result<(Vec<bool>, bool)> {
    if mlen == 0 {
        return Err(invalid("memory length must be at least 1"));
    }
    if dirs.len() != mlen {
        return Err(invalid(format!(
            "expected {mlen} direction bits, got {}",
            dirs.len()
        )));
    }
    let fresh = c ^ true ^ ifeven(dirs)?;
    let mut out = Vec::with_capacity(mlen);
    out.extend_from_slice(&dirs[1..]);
    out.push(fresh);
    Ok((out, c))
}

/// Direction rule with leading redundant registers.
///
/// `dirs` holds `dirs.len() >= mlen` bits, oldest first. The leading
/// `dirs.len() - mlen` bits are carried through unchanged and the rule of
/// [`direction_determine_general`] is applied to the trailing `mlen` bits.
pub fn direction_determine_padded(
    mlen: usize,
    dirs: &[bool],
    c: bool,
) -> Result<(Vec<bool>, bool)> {
    if mlen == 0 || dirs.len() < mlen {
        return Err(invalid(format!(
            "cannot apply a {mlen}-step rule to {} registers",
            dirs.len()
        )));
    }
    let split = dirs.len() - mlen;
    let (tail, c) = direction_determine_general(mlen, &dirs[split..], c)?;
    let mut out = dirs[..split].to_vec();
    out.extend(tail);
    Ok((out, c))
}

/// Memory length of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Memory {
    /// One-step memory, selected by message bit 0.
    One,
    /// Two-step memory, selected by message bit 1.
    Two,
}

impl Memory {
    pub fn for_bit(bit: bool) -> Self {
        if bit {
            Memory::Two
        } else {
            Memory::One
        }
    }

    pub fn length(self) -> usize {
        match self {
            Memory::One => 1,
            Memory::Two => 2,
        }
    }

    /// Direction-determine permutation on `(d2, d1, c)`.
    pub fn determine(self, d2: bool, d1: bool, c: bool) -> (bool, bool, bool) {
        match self {
            Memory::One => (d2, c ^ true ^ d1, c),
            Memory::Two => (d1, c ^ d1 ^ d2, c),
        }
    }
}

/// A step kind together with its coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepKind {
    memory: Memory,
    theta: f64,
    coin: CoinMatrix,
}

impl StepKind {
    pub fn new(memory: Memory, theta: f64) -> Result<Self> {
        Ok(Self {
            memory,
            theta,
            coin: coin_matrix(theta)?,
        })
    }

    pub fn mem1(theta: f64) -> Result<Self> {
        Self::new(Memory::One, theta)
    }

    pub fn mem2(theta: f64) -> Result<Self> {
        Self::new(Memory::Two, theta)
    }

    pub fn memory(&self) -> Memory {
        self.memory
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }
}

pub(crate) fn check_node_count(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(invalid(format!("node count must be odd and >= 3, got {n}")));
    }
    Ok(())
}

/// Packed register index for `(d2, d1, c)`.
#[inline]
pub fn register(d2: bool, d1: bool, c: bool) -> usize {
    4 * d2 as usize + 2 * d1 as usize + c as usize
}

/// Inverse of [`register`].
#[inline]
pub fn unpack_register(j: usize) -> (bool, bool, bool) {
    (j & 4 != 0, j & 2 != 0, j & 1 != 0)
}

/// Full walker state: `8n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    amps: Vec<Amp>,
}

impl WalkState {
    /// Validates node count, length, finiteness and normalization.
    pub fn new(n: usize, amps: Vec<Amp>) -> Result<Self> {
        check_node_count(n)?;
        if amps.len() != REGISTERS * n {
            return Err(invalid(format!(
                "expected {} amplitudes for n = {n}, got {}",
                REGISTERS * n,
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("amplitudes must be finite"));
        }
        let state = Self { n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(invalid(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// The basis state `|x, j>`.
    pub fn basis(n: usize, x: usize, j: usize) -> Result<Self> {
        check_node_count(n)?;
        if x >= n || j >= REGISTERS {
            return Err(invalid(format!("basis index ({x}, {j}) out of range")));
        }
        let mut amps = vec![Amp::new(0.0, 0.0); REGISTERS * n];
        amps[REGISTERS * x + j] = Amp::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Amp] {
        &self.amps
    }

    pub fn amplitude(&self, x: usize, j: usize) -> Amp {
        self.amps[REGISTERS * x + j]
    }

    pub fn into_amplitudes(self) -> Vec<Amp> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability_distribution(&self) -> Vec<f64> {
        node_probabilities(&self.amps)
    }

    pub fn to_vector(&self) -> DVector<Amp> {
        DVector::from_column_slice(&self.amps)
    }
}

/// `p_x = sum_j |A^{x,j}|^2`.
pub fn probability_distribution(state: &WalkState) -> Vec<f64> {
    state.probability_distribution()
}

fn node_probabilities(amps: &[Amp]) -> Vec<f64> {
    amps.chunks_exact(REGISTERS)
        .map(|node| node.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

/// How one output register is assembled: two source registers `src` and
/// `src + 1` (coin bit 0 and 1) at one neighbour, weighted by one coin row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Gather {
    /// Source node is `x + 1` when set, `x - 1` otherwise.
    pub from_right: bool,
    pub src: usize,
    pub coin_row: usize,
}

const fn g(from_right: bool, src: usize, coin_row: usize) -> Gather {
    Gather {
        from_right,
        src,
        coin_row,
    }
}

// Output register j (index) gathers from these sources. Derived from
// Memory::One::determine; locked by the dense-oracle tests.
pub(crate) const MEM1_RULES: [Gather; 8] = [
    g(true, 2, 0),
    g(true, 0, 1),
    g(false, 0, 0),
    g(false, 2, 1),
    g(true, 6, 0),
    g(true, 4, 1),
    g(false, 4, 0),
    g(false, 6, 1),
];

// A^{x,0} = a A^{x+1,0} + b A^{x+1,1}, A^{x,1} = c A^{x+1,4} + d A^{x+1,5}, ...
pub(crate) const MEM2_RULES: [Gather; 8] = [
    g(true, 0, 0),
    g(true, 4, 1),
    g(false, 4, 0),
    g(false, 0, 1),
    g(true, 6, 0),
    g(true, 2, 1),
    g(false, 2, 0),
    g(false, 6, 1),
];

#[cfg(test)]
fn rules(memory: Memory) -> &'static [Gather; 8] {
    match memory {
        Memory::One => &MEM1_RULES,
        Memory::Two => &MEM2_RULES,
    }
}

#[inline(always)]
fn gather_kernel(src: &[Amp], dst: &mut [Amp], n: usize, coin: &CoinMatrix, rules: &[Gather; 8]) {
    debug_assert_eq!(src.len(), REGISTERS * n);
    debug_assert_eq!(dst.len(), REGISTERS * n);
    let rows = [coin.row(0), coin.row(1)];
    for (x, out) in dst.chunks_exact_mut(REGISTERS).enumerate() {
        let right = if x + 1 == n { 0 } else { x + 1 };
        let left = if x == 0 { n - 1 } else { x - 1 };
        let r = &src[REGISTERS * right..REGISTERS * right + REGISTERS];
        let l = &src[REGISTERS * left..REGISTERS * left + REGISTERS];
        for (slot, rule) in out.iter_mut().zip(rules) {
            let nb = if rule.from_right { r } else { l };
            let [u, v] = rows[rule.coin_row];
            *slot = nb[rule.src] * u + nb[rule.src + 1] * v;
        }
    }
}

/// One step from `src` into `dst`. Both slices hold `8n` amplitudes.
pub(crate) fn step_into(src: &[Amp], dst: &mut [Amp], n: usize, kind: &StepKind) {
    match kind.memory {
        Memory::One => gather_kernel(src, dst, n, &kind.coin, &MEM1_RULES),
        Memory::Two => gather_kernel(src, dst, n, &kind.coin, &MEM2_RULES),
    }
}

/// Applies one step and returns the new state.
pub fn step(state: &WalkState, kind: &StepKind) -> WalkState {
    let mut next = vec![Amp::new(0.0, 0.0); state.amps.len()];
    step_into(&state.amps, &mut next, state.n, kind);
    WalkState {
        n: state.n,
        amps: next,
    }
}

/// Double-buffered walker for long step sequences. Memory use is two
/// amplitude buffers regardless of how many steps are applied.
#[derive(Debug, Clone)]
pub struct Walker {
    n: usize,
    cur: Vec<Amp>,
    next: Vec<Amp>,
}

impl Walker {
    pub fn new(state: WalkState) -> Self {
        let next = vec![Amp::new(0.0, 0.0); state.amps.len()];
        Self {
            n: state.n,
            cur: state.amps,
            next,
        }
    }

    pub fn apply(&mut self, kind: &StepKind) {
        step_into(&self.cur, &mut self.next, self.n, kind);
        std::mem::swap(&mut self.cur, &mut self.next);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Amp] {
        &self.cur
    }

    pub fn probabilities(&self) -> Vec<f64> {
        node_probabilities(&self.cur)
    }

    pub fn into_state(self) -> WalkState {
        WalkState {
            n: self.n,
            amps: self.cur,
        }
    }
}

/// Largest node count accepted by [`build_step_unitary`] (a `512 x 512`
/// complex matrix).
pub const DENSE_MAX_NODES: usize = 64;

/// Dense one-step operator `S * (I_n (x) D) * (I_4n (x) C)`.
pub fn build_step_unitary(n: usize, kind: &StepKind) -> Result<DMatrix<Amp>> {
    check_node_count(n)?;
    if n > DENSE_MAX_NODES {
        return Err(invalid(format!(
            "dense step operator limited to n <= {DENSE_MAX_NODES}, got {n}"
        )));
    }
    let dim = REGISTERS * n;
    let one = Amp::new(1.0, 0.0);

    let coin = DMatrix::<Amp>::identity(4 * n, 4 * n).kronecker(&kind.coin.to_matrix());

    let mut dir = DMatrix::<Amp>::zeros(REGISTERS, REGISTERS);
    for j in 0..REGISTERS {
        let (d2, d1, c) = unpack_register(j);
        let (e2, e1, ec) = kind.memory.determine(d2, d1, c);
        dir[(register(e2, e1, ec), j)] = one;
    }
    let dir = DMatrix::<Amp>::identity(n, n).kronecker(&dir);

    let mut shift = DMatrix::<Amp>::zeros(dim, dim);
    for x in 0..n {
        for j in 0..REGISTERS {
            let (_, d1, _) = unpack_register(j);
            let to = if d1 { (x + 1) % n } else { (x + n - 1) % n };
            shift[(REGISTERS * to + j, REGISTERS * x + j)] = one;
        }
    }

    Ok(shift * dir * coin)
}

/// Applies a dense operator to a state. Intended for oracle checks.
pub fn apply_dense(op: &DMatrix<Amp>, state: &WalkState) -> Result<WalkState> {
    if op.nrows() != state.amps.len() || op.ncols() != state.amps.len() {
        return Err(Error::Internal(format!(
            "operator is {}x{}, state has {} amplitudes",
            op.nrows(),
            op.ncols(),
            state.amps.len()
        )));
    }
    let v = op * state.to_vector();
    Ok(WalkState {
        n: state.n,
        amps: v.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn coin_examples() {
        let c = coin_matrix(FRAC_PI_3).unwrap();
        assert!(close(c.a, 0.5, 1e-15));
        assert!(close(c.b, 3f64.sqrt() / 2.0, 1e-15));
        assert_eq!(c.b, c.c);
        assert!(close(c.d, -0.5, 1e-15));

        let c = coin_matrix(FRAC_PI_4).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!(close(c.a, h, 1e-15) && close(c.b, h, 1e-15) && close(c.d, -h, 1e-15));

        let c = coin_matrix(0.0).unwrap();
        assert_eq!((c.a, c.b, c.c, c.d), (1.0, 0.0, 0.0, -1.0));

        assert!(coin_matrix(f64::NAN).is_err());
        assert!(coin_matrix(f64::INFINITY).is_err());
    }

    #[test]
    fn coin_is_orthogonal_over_angles() {
        for k in 0..=120 {
            let c = coin_matrix(k as f64 * PI / 60.0).unwrap();
            assert!((c.a * c.b + c.c * c.d).abs() < 1e-12);
            assert!((c.a * c.a + c.c * c.c - 1.0).abs() < 1e-12);
            assert_eq!(c.b, c.c);
        }
    }

    #[test]
    fn ifeven_examples() {
        assert!(ifeven(&[false, false]).unwrap());
        assert!(!ifeven(&[true, false]).unwrap());
        assert!(ifeven(&[true, true]).unwrap());
        assert!(ifeven(&[]).is_err());
    }

    #[test]
    fn general_rule_examples() {
        let (dirs, c) = direction_determine_general(1, &[false], false).unwrap();
        assert_eq!((dirs, c), (vec![true], false));

        let (dirs, c) = direction_determine_general(2, &[true, false], false).unwrap();
        assert_eq!((dirs, c), (vec![false, true], false));

        let (dirs, c) = direction_determine_general(2, &[false, false], true).unwrap();
        assert_eq!((dirs, c), (vec![false, true], true));

        assert!(direction_determine_general(2, &[true], false).is_err());
        assert!(direction_determine_general(0, &[], false).is_err());
    }

    #[test]
    fn general_rule_specializes_to_both_memories() {
        for j in 0..REGISTERS {
            let (d2, d1, c) = unpack_register(j);

            let (e2, e1, ec) = Memory::One.determine(d2, d1, c);
            let (dirs, cc) = direction_determine_general(1, &[d1], c).unwrap();
            assert_eq!((e1, ec), (dirs[0], cc));
            assert_eq!(e2, d2);
            let (padded, pc) = direction_determine_padded(1, &[d2, d1], c).unwrap();
            assert_eq!((padded, pc), (vec![e2, e1], ec));

            let (e2, e1, ec) = Memory::Two.determine(d2, d1, c);
            let (dirs, cc) = direction_determine_general(2, &[d2, d1], c).unwrap();
            assert_eq!((dirs, cc), (vec![e2, e1], ec));
        }
    }

    #[test]
    fn padded_rule_keeps_leading_bits() {
        let dirs = [true, false, true, true];
        let (out, _) = direction_determine_padded(2, &dirs, false).unwrap();
        assert_eq!(&out[..2], &dirs[..2]);
        assert_eq!(out[2], dirs[3]);
        assert!(direction_determine_padded(3, &[true], false).is_err());
    }

    /// Re-derives each gather rule from the direction permutation: the
    /// source registers are the preimages of the output register, and the
    /// source node is opposite to the new direction.
    #[test]
    fn gather_tables_follow_from_direction_rules() {
        for memory in [Memory::One, Memory::Two] {
            for (j_out, rule) in rules(memory).iter().enumerate() {
                let (_, new_d1, c_out) = unpack_register(j_out);
                let preimages: Vec<usize> = (0..REGISTERS)
                    .filter(|&j| {
                        let (d2, d1, _) = unpack_register(j);
                        let (e2, e1, _) = memory.determine(d2, d1, c_out);
                        register(e2, e1, c_out) == j_out
                    })
                    .collect();
                assert_eq!(
                    preimages,
                    vec![rule.src, rule.src + 1],
                    "{memory:?} j={j_out}"
                );
                assert_eq!(rule.coin_row, c_out as usize);
                assert_eq!(rule.from_right, !new_d1);
            }
        }
    }

    #[test]
    fn each_output_written_once_each_input_read_twice() {
        let n = 7;
        for memory in [Memory::One, Memory::Two] {
            let mut reads = vec![0usize; REGISTERS * n];
            let mut writes = vec![0usize; REGISTERS * n];
            let mut mults = 0;
            for x in 0..n {
                for (j, rule) in rules(memory).iter().enumerate() {
                    let nb = if rule.from_right {
                        (x + 1) % n
                    } else {
                        (x + n - 1) % n
                    };
                    reads[REGISTERS * nb + rule.src] += 1;
                    reads[REGISTERS * nb + rule.src + 1] += 1;
                    writes[REGISTERS * x + j] += 1;
                    mults += 2;
                }
            }
            assert!(writes.iter().all(|&w| w == 1));
            assert!(reads.iter().all(|&r| r == 2));
            assert_eq!(mults, 16 * n);
        }
    }

    fn initial(n: usize, alpha: f64) -> WalkState {
        let mut amps = vec![Amp::new(0.0, 0.0); REGISTERS * n];
        amps[4] = Amp::new(alpha.cos(), 0.0);
        amps[5] = Amp::new(alpha.sin(), 0.0);
        WalkState::new(n, amps).unwrap()
    }

    #[test]
    fn single_mem1_step_lands_on_node_one_register_six() {
        let n = 5;
        let s = step(&initial(n, FRAC_PI_4), &StepKind::mem1(FRAC_PI_4).unwrap());
        let a = s.amplitude(1, 6);
        assert!((a.re - 1.0).abs() < 1e-12 && a.im == 0.0);
        let p = s.probability_distribution();
        assert!((p[1] - 1.0).abs() < 1e-12);
        assert!(p.iter().enumerate().all(|(x, &v)| x == 1 || v < 1e-24));
    }

    #[test]
    fn single_mem2_step_splits_between_neighbours() {
        let n = 7;
        let s = step(&initial(n, FRAC_PI_4), &StepKind::mem2(FRAC_PI_3).unwrap());
        let p = s.probability_distribution();
        let r3 = 3f64.sqrt() / 4.0;
        assert!((p[1] - (0.5 + r3)).abs() < 1e-12);
        assert!((p[n - 1] - (0.5 - r3)).abs() < 1e-12);
        assert!(p[2..n - 1].iter().all(|&v| v == 0.0));
        assert_eq!(p[0], 0.0);
    }

    #[test]
    fn dense_operator_is_unitary_with_two_entries_per_column() {
        for n in [3, 5, 7, 9] {
            for kind in [StepKind::mem1(0.3).unwrap(), StepKind::mem2(1.1).unwrap()] {
                let u = build_step_unitary(n, &kind).unwrap();
                let id = &u * u.adjoint();
                let eye = DMatrix::<Amp>::identity(8 * n, 8 * n);
                assert!((id - eye).iter().all(|z| z.norm() < 1e-12));
                for col in u.column_iter() {
                    let nz: Vec<_> = col.iter().filter(|z| z.norm() > 0.0).collect();
                    assert_eq!(nz.len(), 2);
                    let total: f64 = nz.iter().map(|z| z.norm_sqr()).sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dense_mem2_column_matches_first_table_row() {
        let kind = StepKind::mem2(FRAC_PI_3).unwrap();
        let u = build_step_unitary(5, &kind).unwrap();
        let col = u.column(0);
        let nz: Vec<(usize, Amp)> = col
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, z)| (i, *z))
            .collect();
        assert_eq!(nz.len(), 2);
        assert_eq!(nz[0].0, 8 + 3);
        assert_eq!(nz[0].1.re, kind.coin().c);
        assert_eq!(nz[1].0, 8 * 4);
        assert_eq!(nz[1].1.re, kind.coin().a);
    }

    #[test]
    fn fused_step_matches_dense_on_basis_states() {
        for n in [3, 5, 7] {
            for kind in [StepKind::mem1(0.7).unwrap(), StepKind::mem2(0.2).unwrap()] {
                let u = build_step_unitary(n, &kind).unwrap();
                for i in 0..REGISTERS * n {
                    let s = WalkState::basis(n, i / 8, i % 8).unwrap();
                    let fused = step(&s, &kind);
                    let dense = apply_dense(&u, &s).unwrap();
                    for (a, b) in fused.amplitudes().iter().zip(dense.amplitudes()) {
                        assert!((a - b).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn state_validation() {
        assert!(WalkState::new(5, vec![Amp::new(0.0, 0.0); 40]).is_err());
        assert!(WalkState::new(4, vec![Amp::new(0.0, 0.0); 32]).is_err());
        assert!(WalkState::new(1, vec![Amp::new(0.0, 0.0); 8]).is_err());
        assert!(WalkState::new(3, vec![Amp::new(0.0, 0.0); 23]).is_err());
        let mut amps = vec![Amp::new(0.0, 0.0); 24];
        amps[0] = Amp::new(f64::NAN, 0.0);
        assert!(WalkState::new(3, amps).is_err());
        assert!(WalkState::basis(3, 3, 0).is_err());
        assert!(build_step_unitary(4, &StepKind::mem1(0.5).unwrap()).is_err());
    }

    #[test]
    fn walker_agrees_with_step() {
        let kinds = [StepKind::mem1(0.4).unwrap(), StepKind::mem2(1.2).unwrap()];
        let mut s = initial(9, 0.9);
        let mut w = Walker::new(s.clone());
        for i in 0..50 {
            let k = &kinds[(i * 7 + 3) % 5 % 2];
            s = step(&s, k);
            w.apply(k);
        }
        assert_eq!(w.into_state(), s);
    }
}
