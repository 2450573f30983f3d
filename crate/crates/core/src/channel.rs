//! Binary-input memoryless channels and their likelihood pairs.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{BitVec, ProbPair};

/// BPSK maps bit 0 to +1 and bit 1 to -1 on the AWGN channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    Bsc { p: f64 },
    Awgn { sigma: f64 },
    Bec { eps: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    Bit(u8),
    Erasure,
    Real(f64),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Bit(b) => write!(f, "{b}"),
            Symbol::Erasure => f.write_str("e"),
            Symbol::Real(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedVec(pub Vec<Symbol>);

impl ReceivedVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl ChannelModel {
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::arg(format!("BSC crossover {p} outside [0, 1/2]")));
        }
        Ok(ChannelModel::Bsc { p })
    }

    pub fn awgn(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::arg(format!("AWGN sigma {sigma} must be positive")));
        }
        Ok(ChannelModel::Awgn { sigma })
    }

    /// AWGN at the given Eb/N0 (dB) for a code of the given rate.
    pub fn awgn_at_snr(snr_db: f64, rate: f64) -> Result<Self> {
        Self::awgn(snr_db_to_sigma(snr_db, rate)?)
    }

    pub fn bec(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::arg(format!("BEC erasure probability {eps} outside [0, 1]")));
        }
        Ok(ChannelModel::Bec { eps })
    }

    /// `(W(y|0), W(y|1))`. Erasures map to `(1/2, 1/2)` and BEC bits to a
    /// one-hot pair; only ratios matter to the decoders.
    pub fn prob_pair(&self, y: Symbol) -> Result<ProbPair<f64>> {
        match (*self, y) {
            (ChannelModel::Bsc { p }, Symbol::Bit(b)) if b <= 1 => Ok(if b == 0 {
                ProbPair::new(1.0 - p, p)
            } else {
                ProbPair::new(p, 1.0 - p)
            }),
            (ChannelModel::Awgn { sigma }, Symbol::Real(v)) if v.is_finite() => {
                let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
                let var2 = 2.0 * sigma * sigma;
                Ok(ProbPair::new(
                    norm * (-(v - 1.0).powi(2) / var2).exp(),
                    norm * (-(v + 1.0).powi(2) / var2).exp(),
                ))
            }
            (ChannelModel::Bec { .. }, Symbol::Bit(0)) => Ok(ProbPair::new(1.0, 0.0)),
            (ChannelModel::Bec { .. }, Symbol::Bit(1)) => Ok(ProbPair::new(0.0, 1.0)),
            (ChannelModel::Bec { .. }, Symbol::Erasure) => Ok(ProbPair::new(0.5, 0.5)),
            (model, sym) => Err(Error::arg(format!("symbol {sym} is not an output of {model:?}"))),
        }
    }

    /// `ln W(y|bit)`, computed directly for AWGN so it never underflows.
    pub fn log_likelihood(&self, y: Symbol, bit: u8) -> Result<f64> {
        match (*self, y) {
            (ChannelModel::Awgn { sigma }, Symbol::Real(v)) if v.is_finite() => {
                let mean = if bit == 0 { 1.0 } else { -1.0 };
                Ok(-(v - mean).powi(2) / (2.0 * sigma * sigma) - (sigma * (2.0 * PI).sqrt()).ln())
            }
            _ => Ok(self.prob_pair(y)?.get(bit).ln()),
        }
    }

    /// Likelihood pairs for every received symbol.
    pub fn prob_pairs(&self, y: &ReceivedVec) -> Result<Vec<ProbPair<f64>>> {
        y.0.iter().map(|&s| self.prob_pair(s)).collect()
    }

    /// `ln W(y|c)` summed over all positions.
    pub fn log_likelihood_word(&self, y: &ReceivedVec, c: &[u8]) -> Result<f64> {
        if y.len() != c.len() {
            return Err(Error::arg("received word and codeword lengths differ"));
        }
        y.0.iter()
            .zip(c)
            .map(|(&s, &b)| self.log_likelihood(s, b))
            .sum()
    }

    pub fn transmit<R: Rng + ?Sized>(&self, c: &BitVec, rng: &mut R) -> ReceivedVec {
        let symbols = c
            .as_slice()
            .iter()
            .map(|&bit| match *self {
                ChannelModel::Bsc { p } => Symbol::Bit(bit ^ u8::from(rng.random::<f64>() < p)),
                ChannelModel::Awgn { sigma } => {
                    let x = if bit == 0 { 1.0 } else { -1.0 };
                    let z: f64 = rng.sample(StandardNormal);
                    Symbol::Real(x + sigma * z)
                }
                ChannelModel::Bec { eps } => {
                    if rng.random::<f64>() < eps {
                        Symbol::Erasure
                    } else {
                        Symbol::Bit(bit)
                    }
                }
            })
            .collect();
        ReceivedVec(symbols)
    }

    /// Bhattacharyya parameter of the channel, used as a construction seed.
    pub fn bhattacharyya(&self) -> f64 {
        match *self {
            ChannelModel::Bsc { p } => 2.0 * (p * (1.0 - p)).sqrt(),
            ChannelModel::Awgn { sigma } => (-1.0 / (2.0 * sigma * sigma)).exp(),
            ChannelModel::Bec { eps } => eps,
        }
    }

    /// Parses one whitespace-separated token of a received-word file.
    pub fn parse_symbol(&self, token: &str) -> Result<Symbol> {
        match self {
            ChannelModel::Awgn { .. } => token
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Symbol::Real)
                .ok_or_else(|| Error::arg(format!("invalid real symbol {token:?}"))),
            ChannelModel::Bsc { .. } | ChannelModel::Bec { .. } => match token {
                "0" => Ok(Symbol::Bit(0)),
                "1" => Ok(Symbol::Bit(1)),
                "e" | "?" if matches!(self, ChannelModel::Bec { .. }) => Ok(Symbol::Erasure),
                _ => Err(Error::arg(format!("invalid symbol {token:?}"))),
            },
        }
    }
}

/// Noise standard deviation for unit-energy BPSK at Eb/N0 = `snr_db`:
/// `sigma = sqrt(1 / (2 * rate * 10^(snr_db / 10)))`.
pub fn snr_db_to_sigma(snr_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::arg(format!("rate {rate} outside (0, 1]")));
    }
    if !snr_db.is_finite() {
        return Err(Error::arg("snr must be finite"));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0))).sqrt())
}

/// Independent generator for item `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
