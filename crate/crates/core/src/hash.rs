//! Message encoding, the controlled walk, and digest extraction.
//!
//! Bytes are expanded most-significant bit first. A 0 bit applies a
//! one-step-memory step with coin angle `theta0`, a 1 bit a two-step-memory
//! step with `theta1`, first bit first. Node `x` of the final distribution
//! contributes the block `floor(p_x * 10^l) mod 2^m`.

use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};
use crate::params::HashParams;
use crate::walk::{Amp, StepKind, WalkState, Walker, REGISTERS};

/// Tolerance on `sum p_x = 1` accepted by [`digest_from_distribution`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-10;

/// Ordered message bits; one walk step per bit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct BitMessage {
    bits: Vec<bool>,
}

impl BitMessage {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_bytes(data: &[u8]) -> Self {
        Self {
            bits: byte_bits(data).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

impl From<Vec<bool>> for BitMessage {
    fn from(bits: Vec<bool>) -> Self {
        Self::new(bits)
    }
}

/// MSB-first bit expansion without materializing the message.
pub fn byte_bits(data: &[u8]) -> impl Iterator<Item = bool> + '_ {
    data.iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
}

pub fn bits_from_bytes(data: &[u8]) -> BitMessage {
    BitMessage::from_bytes(data)
}

/// `cos(alpha)|0, d2=1, d1=0, c=0> + sin(alpha)|0, d2=1, d1=0, c=1>`.
pub fn initial_state(params: &HashParams) -> Result<WalkState> {
    params.validate()?;
    let mut amps = vec![Amp::new(0.0, 0.0); REGISTERS * params.n];
    amps[4] = Amp::new(params.alpha.cos(), 0.0);
    amps[5] = Amp::new(params.alpha.sin(), 0.0);
    WalkState::new(params.n, amps)
}

/// Step kinds for message bits 0 and 1.
pub fn step_kinds(params: &HashParams) -> Result<[StepKind; 2]> {
    Ok([
        StepKind::mem1(params.theta0)?,
        StepKind::mem2(params.theta1)?,
    ])
}

/// Drives `state` with every bit of `bits`, first bit first.
pub fn evolve_bits<I>(state: WalkState, bits: I, params: &HashParams) -> Result<WalkState>
where
    I: IntoIterator<Item = bool>,
{
    if state.n() != params.n {
        return Err(invalid(format!(
            "state has {} nodes, params expect {}",
            state.n(),
            params.n
        )));
    }
    let kinds = step_kinds(params)?;
    let mut walker = Walker::new(state);
    for bit in bits {
        walker.apply(&kinds[bit as usize]);
    }
    Ok(walker.into_state())
}

pub fn evolve(state: WalkState, msg: &BitMessage, params: &HashParams) -> Result<WalkState> {
    evolve_bits(state, msg.bits().iter().copied(), params)
}

/// Final node distribution for a bit stream, starting from the initial state.
pub fn final_distribution<I>(bits: I, params: &HashParams) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = bool>,
{
    let state = evolve_bits(initial_state(params)?, bits, params)?;
    Ok(state.probability_distribution())
}

/// Digest blocks from a final distribution.
pub fn digest_from_distribution(prob: &[f64], params: &HashParams) -> Result<Digest> {
    if prob.len() != params.n {
        return Err(invalid(format!(
            "distribution has {} entries, expected {}",
            prob.len(),
            params.n
        )));
    }
    if let Some((x, p)) = prob
        .iter()
        .enumerate()
        .find(|(_, p)| p.is_nan() || **p < 0.0)
    {
        return Err(Error::Internal(format!(
            "probability p[{x}] = {p} is not >= 0"
        )));
    }
    let total: f64 = prob.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::Internal(format!("distribution sums to {total}")));
    }
    let scale = 10f64.powi(params.l as i32);
    let modulus = 1u64 << params.m;
    let blocks = prob
        .iter()
        .map(|&p| ((p * scale).floor() as u64 % modulus) as u32)
        .collect();
    Digest::new(params.m, blocks)
}

/// Hashes a byte message.
pub fn hash(data: &[u8], params: &HashParams) -> Result<Digest> {
    let prob = final_distribution(byte_bits(data), params)?;
    digest_from_distribution(&prob, params)
}

/// Hashes a bit message (messages whose length is not a multiple of 8).
pub fn hash_bits(msg: &BitMessage, params: &HashParams) -> Result<Digest> {
    let prob = final_distribution(msg.bits().iter().copied(), params)?;
    digest_from_distribution(&prob, params)
}

/// `n` blocks of `m` bits each.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digest {
    m: u32,
    blocks: Vec<u32>,
}

impl Digest {
    pub fn new(m: u32, blocks: Vec<u32>) -> Result<Self> {
        if m == 0 || m > 32 {
            return Err(invalid(format!("block width {m} out of range")));
        }
        if m < 32 {
            if let Some(b) = blocks.iter().find(|&&b| b >> m != 0) {
                return Err(invalid(format!("block {b} does not fit in {m} bits")));
            }
        }
        Ok(Self { m, blocks })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn bit_len(&self) -> usize {
        self.blocks.len() * self.m as usize
    }

    /// Bit `i` (0-based) of `B_0 || B_1 || ...`, each block MSB first.
    pub fn bit(&self, i: usize) -> bool {
        let m = self.m as usize;
        let block = self.blocks[i / m];
        (block >> (m - 1 - i % m)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.bit_len()).map(|i| self.bit(i))
    }

    /// `ceil(n*m / 8)` bytes, with `(8 - n*m) mod 8` leading zero bits.
    pub fn to_bytes(&self) -> Vec<u8> {
        pack_bits(self.bits(), self.bit_len(), 8)
            .into_iter()
            .map(|v| v as u8)
            .collect()
    }

    /// `ceil(n*m / 4)` uppercase hex digits, no separators.
    pub fn to_hex(&self) -> String {
        pack_bits(self.bits(), self.bit_len(), 4)
            .into_iter()
            .map(|v| char::from_digit(v, 16).unwrap().to_ascii_uppercase())
            .collect()
    }

    /// Byte view as space-separated uppercase pairs, e.g. `D8 CD B4`.
    pub fn to_hex_pretty(&self) -> String {
        let mut s = String::with_capacity(3 * self.bit_len().div_ceil(8));
        for (i, b) in self.to_bytes().iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{b:02X}").unwrap();
        }
        s
    }

    fn check_comparable(&self, other: &Digest) -> Result<()> {
        if self.m != other.m || self.blocks.len() != other.blocks.len() {
            return Err(invalid(format!(
                "digest shapes differ: {}x{} vs {}x{}",
                self.blocks.len(),
                self.m,
                other.blocks.len(),
                other.m
            )));
        }
        Ok(())
    }

    /// Number of differing bits.
    pub fn hamming(&self, other: &Digest) -> Result<u32> {
        self.check_comparable(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum())
    }

    /// 1-based positions of differing bits.
    pub fn diff_positions(&self, other: &Digest) -> Result<Vec<usize>> {
        self.check_comparable(other)?;
        Ok((0..self.bit_len())
            .filter(|&i| self.bit(i) != other.bit(i))
            .map(|i| i + 1)
            .collect())
    }
}

/// Packs `len` bits into `width`-bit words, left-padding with zeros.
fn pack_bits(bits: impl Iterator<Item = bool>, len: usize, width: usize) -> Vec<u32> {
    let pad = (width - len % width) % width;
    let mut out = Vec::with_capacity((len + pad) / width);
    let mut acc = 0u32;
    let mut filled = pad;
    for bit in bits {
        acc = (acc << 1) | bit as u32;
        filled += 1;
        if filled == width {
            out.push(acc);
            acc = 0;
            filled = 0;
        }
    }
    out
}

/// Hamming distance between two digests.
pub fn hamming(a: &Digest, b: &Digest) -> Result<u32> {
    a.hamming(b)
}
