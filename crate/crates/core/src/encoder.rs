//! Polar encoding and the outer check (CRC or random parity) carried on the
//! last unfrozen positions.

use rand::Rng;

use crate::error::{Error, Result};
use crate::types::{BitVec, CodeSpec};

/// Maps `u` to the codeword seen at the decoder's layer-0 branches.
///
/// Each step combines phases `(2psi, 2psi + 1)` of branch `beta` into
/// branches `2beta` (xor of the two) and `2beta + 1` (the odd bit), the same
/// rule the decoders use to propagate decisions downwards.
pub fn polar_transform(u: &[u8]) -> Result<BitVec> {
    let n = u.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::arg(format!("length {n} is not a power of two >= 2")));
    }
    if u.iter().any(|&b| b > 1) {
        return Err(Error::arg("input contains non-binary values"));
    }
    let m = n.trailing_zeros();
    let mut cur = u.to_vec();
    let mut next = vec![0u8; n];
    for lambda in (1..=m).rev() {
        let half = 1usize << (lambda - 1);
        for beta in 0..(n >> lambda) {
            for psi in 0..half {
                let even = cur[2 * psi + (beta << lambda)];
                let odd = cur[2 * psi + 1 + (beta << lambda)];
                next[psi + (2 * beta) * half] = even ^ odd;
                next[psi + (2 * beta + 1) * half] = odd;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    BitVec::from_bits(cur)
}

/// Inverse of [`polar_transform`]: recovers `u` from a codeword.
pub fn polar_inverse(c: &[u8]) -> Result<BitVec> {
    let n = c.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::arg(format!("length {n} is not a power of two >= 2")));
    }
    let m = n.trailing_zeros();
    let mut cur = c.to_vec();
    let mut next = vec![0u8; n];
    for lambda in 1..=m {
        let half = 1usize << (lambda - 1);
        for beta in 0..(n >> lambda) {
            for psi in 0..half {
                let odd = cur[psi + (2 * beta + 1) * half];
                let even = cur[psi + (2 * beta) * half] ^ odd;
                next[2 * psi + (beta << lambda)] = even;
                next[2 * psi + 1 + (beta << lambda)] = odd;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    BitVec::from_bits(cur)
}

/// Non-reflected CRC processed one bit at a time, most significant bit first,
/// with no final xor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crc {
    width: usize,
    poly: u64,
    init: u64,
}

impl Crc {
    pub fn new(width: usize, poly: u64, init: u64) -> Result<Self> {
        if !(1..=32).contains(&width) {
            return Err(Error::arg(format!("unsupported crc width {width}")));
        }
        let mask = (1u64 << width) - 1;
        Ok(Crc {
            width,
            poly: poly & mask,
            init: init & mask,
        })
    }

    /// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF.
    pub fn ccitt16() -> Self {
        Crc {
            width: 16,
            poly: 0x1021,
            init: 0xFFFF,
        }
    }

    /// Default generator for the supported widths: CRC-8/SMBUS,
    /// CRC-16/CCITT-FALSE and CRC-32/MPEG-2.
    pub fn standard(width: usize) -> Result<Self> {
        match width {
            8 => Crc::new(8, 0x07, 0x00),
            16 => Ok(Crc::ccitt16()),
            32 => Crc::new(32, 0x04C1_1DB7, 0xFFFF_FFFF),
            other => Err(Error::arg(format!(
                "crc width {other} unsupported (expected 8, 16 or 32)"
            ))),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Register value after shifting in `payload`.
    pub fn remainder(&self, payload: &[u8]) -> u64 {
        let mask = (1u64 << self.width) - 1;
        let top = self.width - 1;
        let mut reg = self.init;
        for &bit in payload {
            let feedback = ((reg >> top) & 1) ^ u64::from(bit & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    pub fn compute(&self, payload: &[u8]) -> Result<BitVec> {
        if payload.is_empty() {
            return Err(Error::arg("crc payload is empty"));
        }
        let reg = self.remainder(payload);
        let bits = (0..self.width)
            .map(|i| ((reg >> (self.width - 1 - i)) & 1) as u8)
            .collect();
        BitVec::from_bits(bits)
    }

    /// True when the last `width` bits of `word` are the CRC of the rest.
    pub fn verify(&self, word: &[u8]) -> bool {
        if word.len() <= self.width {
            return false;
        }
        let (payload, check) = word.split_at(word.len() - self.width);
        match self.compute(payload) {
            Ok(expected) => expected.as_slice() == check,
            Err(_) => false,
        }
    }
}

/// Parity bits `check[j] = xor_i rows[j][i] & payload[i]`, i.e. a systematic
/// parity-check matrix with a random left part and an identity right part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    rows: Vec<Vec<u8>>,
}

impl ParityCheck {
    pub fn random<R: Rng + ?Sized>(payload_len: usize, width: usize, rng: &mut R) -> Result<Self> {
        if width == 0 || payload_len == 0 {
            return Err(Error::arg("parity check needs a nonempty payload and width"));
        }
        let rows = (0..width)
            .map(|_| (0..payload_len).map(|_| rng.random_range(0..2u8)).collect())
            .collect();
        Ok(ParityCheck { rows })
    }

    pub fn width(&self) -> usize {
        self.rows.len()
    }

    pub fn payload_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn compute(&self, payload: &[u8]) -> Result<BitVec> {
        if payload.len() != self.payload_len() {
            return Err(Error::arg(format!(
                "parity payload has {} bits, expected {}",
                payload.len(),
                self.payload_len()
            )));
        }
        let bits = self
            .rows
            .iter()
            .map(|row| row.iter().zip(payload).fold(0u8, |acc, (a, b)| acc ^ (a & b)))
            .collect();
        BitVec::from_bits(bits)
    }
}

/// The check appended to the payload inside `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OuterCode {
    Crc(Crc),
    Parity(ParityCheck),
}

impl OuterCode {
    pub fn width(&self) -> usize {
        match self {
            OuterCode::Crc(c) => c.width(),
            OuterCode::Parity(p) => p.width(),
        }
    }

    pub fn compute(&self, payload: &[u8]) -> Result<BitVec> {
        match self {
            OuterCode::Crc(c) => c.compute(payload),
            OuterCode::Parity(p) => p.compute(payload),
        }
    }

    pub fn verify(&self, payload: &[u8], check: &[u8]) -> bool {
        check.len() == self.width()
            && self
                .compute(payload)
                .map(|c| c.as_slice() == check)
                .unwrap_or(false)
    }
}

/// Assembles `u`: frozen values, then payload on the first `k - r` unfrozen
/// positions and the check bits on the last `r`.
pub fn build_u(info: &[u8], spec: &CodeSpec, outer: Option<&OuterCode>) -> Result<BitVec> {
    if info.len() != spec.info_len() {
        return Err(Error::arg(format!(
            "expected {} information bits, got {}",
            spec.info_len(),
            info.len()
        )));
    }
    if info.iter().any(|&b| b > 1) {
        return Err(Error::arg("information bits must be 0 or 1"));
    }
    let r = spec.crc_width();
    let check = match (r, outer) {
        (0, _) => BitVec::default(),
        (_, Some(code)) if code.width() == r => code.compute(info)?,
        (_, Some(code)) => {
            return Err(Error::arg(format!(
                "outer code width {} does not match crc width {r}",
                code.width()
            )))
        }
        (_, None) => Crc::standard(r)?.compute(info)?,
    };
    let mut u = vec![0u8; spec.n()];
    for (pos, value) in spec.frozen_entries() {
        u[pos] = value;
    }
    let carried = info.iter().chain(check.as_slice());
    for (&pos, &bit) in spec.unfrozen_positions().iter().zip(carried) {
        u[pos] = bit;
    }
    BitVec::from_bits(u)
}

/// Encodes with the default CRC for `spec.crc_width()` when it is nonzero.
pub fn encode(info: &[u8], spec: &CodeSpec) -> Result<BitVec> {
    encode_with(info, spec, None)
}

pub fn encode_with(info: &[u8], spec: &CodeSpec, outer: Option<&OuterCode>) -> Result<BitVec> {
    let u = build_u(info, spec, outer)?;
    polar_transform(u.as_slice())
}
