//! Shared domain types and the layer/phase/branch index arithmetic.
//!
//! A decoder state at layer `lambda` (`0 <= lambda <= m`) is addressed by a
//! phase `phi < 2^lambda` and a branch `beta < 2^(m - lambda)`. The flat
//! array index is `phi + 2^lambda * beta`, which is a bijection onto
//! `[0, 2^m)` for every fixed layer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::likelihood::Likelihood;

/// Flat index of `(phi, beta)` at `lambda`, with bounds checks against `m`.
pub fn phase_branch_index(m: u32, lambda: u32, phi: usize, beta: usize) -> Result<usize> {
    if lambda > m {
        return Err(Error::arg(format!("layer {lambda} exceeds m = {m}")));
    }
    if phi >= 1usize << lambda {
        return Err(Error::arg(format!("phase {phi} out of range at layer {lambda}")));
    }
    if beta >= 1usize << (m - lambda) {
        return Err(Error::arg(format!("branch {beta} out of range at layer {lambda}")));
    }
    Ok(flat_index(lambda, phi, beta))
}

#[inline]
pub(crate) fn flat_index(lambda: u32, phi: usize, beta: usize) -> usize {
    phi + (beta << lambda)
}

/// Branches at layer `lambda - 1` that feed `beta` at layer `lambda`.
#[inline]
pub fn child_branches(beta: usize) -> (usize, usize) {
    (2 * beta, 2 * beta + 1)
}

/// A sequence of bits stored one per byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec(Vec<u8>);

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec(vec![0; len])
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::arg(format!("non-binary value {} at {pos}", bits[pos])));
        }
        Ok(BitVec(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len() != other.len() {
            return Err(Error::arg("xor of bit vectors with different lengths"));
        }
        Ok(BitVec(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &BitVec) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::arg(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitVec)
    }
}

/// The pair `(W(y|0), W(y|1))`. Only the ratio between the components matters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbPair<T = f64> {
    pub p0: T,
    pub p1: T,
}

impl<T: Likelihood> ProbPair<T> {
    pub fn new(p0: T, p1: T) -> Self {
        ProbPair { p0, p1 }
    }

    pub fn zero() -> Self {
        ProbPair {
            p0: T::zero(),
            p1: T::zero(),
        }
    }

    #[inline]
    pub fn get(&self, bit: u8) -> &T {
        if bit == 0 {
            &self.p0
        } else {
            &self.p1
        }
    }
}

impl<T: Likelihood> Default for ProbPair<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Two bit slots selected by phase parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BitPair(pub [u8; 2]);

impl BitPair {
    #[inline]
    pub fn slot(&self, parity: usize) -> u8 {
        self.0[parity & 1]
    }

    #[inline]
    pub fn set_slot(&mut self, parity: usize, bit: u8) {
        self.0[parity & 1] = bit;
    }
}

/// A polar code: length `n = 2^m`, a frozen set with per-position values and
/// an optional outer check of `crc_width` bits carried on the last unfrozen
/// positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    m: u32,
    frozen: Vec<Option<u8>>,
    unfrozen: Vec<usize>,
    crc_width: usize,
}

impl CodeSpec {
    /// Builds a spec from `(position, value)` pairs for the frozen set.
    pub fn new(n: usize, frozen: &[(usize, u8)], crc_width: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::arg(format!("block length {n} is not a power of two >= 2")));
        }
        let mut mask = vec![None; n];
        for &(pos, value) in frozen {
            if pos >= n {
                return Err(Error::arg(format!("frozen index {pos} out of range for n = {n}")));
            }
            if value > 1 {
                return Err(Error::arg(format!("frozen value {value} at {pos} is not a bit")));
            }
            if mask[pos].replace(value).is_some() {
                return Err(Error::arg(format!("duplicate frozen index {pos}")));
            }
        }
        let unfrozen: Vec<usize> = (0..n).filter(|&i| mask[i].is_none()).collect();
        let spec = CodeSpec {
            m: n.trailing_zeros(),
            frozen: mask,
            unfrozen,
            crc_width: 0,
        };
        spec.with_crc_width(crc_width)
    }

    /// Frozen positions with the default all-zero frozen values.
    pub fn with_zero_frozen(n: usize, positions: &[usize], crc_width: usize) -> Result<Self> {
        let pairs: Vec<(usize, u8)> = positions.iter().map(|&p| (p, 0)).collect();
        Self::new(n, &pairs, crc_width)
    }

    /// The same code with a different outer-check width.
    pub fn with_crc_width(mut self, crc_width: usize) -> Result<Self> {
        if crc_width > 0 && crc_width >= self.k() {
            return Err(Error::arg(format!(
                "crc width {crc_width} must be smaller than k = {}",
                self.k()
            )));
        }
        self.crc_width = crc_width;
        Ok(self)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.frozen.len()
    }

    /// Number of unfrozen positions, including any check bits.
    pub fn k(&self) -> usize {
        self.unfrozen.len()
    }

    pub fn crc_width(&self) -> usize {
        self.crc_width
    }

    /// Number of payload bits, `k - r`.
    pub fn info_len(&self) -> usize {
        self.k() - self.crc_width
    }

    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.n() as f64
    }

    #[inline]
    pub fn frozen_value(&self, phi: usize) -> Option<u8> {
        self.frozen[phi]
    }

    pub fn is_frozen(&self, phi: usize) -> bool {
        self.frozen[phi].is_some()
    }

    /// Unfrozen positions in increasing order.
    pub fn unfrozen_positions(&self) -> &[usize] {
        &self.unfrozen
    }

    /// Frozen `(position, value)` pairs in increasing position order.
    pub fn frozen_entries(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.frozen
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (i, b)))
    }

    /// Payload bits of `u`: the first `k - r` unfrozen positions.
    pub fn extract_info(&self, u: &[u8]) -> BitVec {
        BitVec(self.unfrozen[..self.info_len()].iter().map(|&i| u[i]).collect())
    }

    /// Check bits of `u`: the last `r` unfrozen positions.
    pub fn extract_check(&self, u: &[u8]) -> BitVec {
        BitVec(self.unfrozen[self.info_len()..].iter().map(|&i| u[i]).collect())
    }
}
