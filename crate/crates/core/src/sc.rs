//! Successive-cancellation decoding.
//!
//! [`sc_decode_reference`] keeps every phase of every layer (`n log n` cells)
//! and is kept as the correctness oracle. [`ScDecoder`] keeps one probability
//! pair and one bit pair per branch per layer (`< 4n` cells in total) and is
//! what the rest of the crate uses.

use crate::cells::{BitPairArray, Cells};
use crate::error::{Error, Result};
use crate::likelihood::{combine_even, combine_odd, Likelihood};
use crate::types::{flat_index, BitVec, CodeSpec, ProbPair};

#[derive(Debug, Clone, PartialEq)]
pub struct ScOutcome<T = f64> {
    pub u_hat: BitVec,
    pub c_hat: BitVec,
    /// Top-layer pair `(W(y, u_0..u_{phi-1} | 0), ... | 1)` seen at each
    /// phase, up to the layer rescaling.
    pub decision_probs: Vec<ProbPair<T>>,
}

/// Hard decision: 0 only if `p0 > p1`, so ties go to 1.
#[inline]
pub fn hard_decision<T: Likelihood>(pair: &ProbPair<T>) -> u8 {
    if pair.p0 > pair.p1 {
        0
    } else {
        1
    }
}

fn check_input<T>(spec: &CodeSpec, probs: &[ProbPair<T>]) -> Result<()> {
    if probs.len() != spec.n() {
        return Err(Error::arg(format!(
            "expected {} likelihood pairs, got {}",
            spec.n(),
            probs.len()
        )));
    }
    Ok(())
}

/// The `O(n log n)`-space decoder with phase-indexed arrays on every layer.
pub fn sc_decode_reference<T: Likelihood>(
    spec: &CodeSpec,
    probs: &[ProbPair<T>],
) -> Result<ScOutcome<T>> {
    sc_decode_reference_with(spec, probs, true)
}

/// [`sc_decode_reference`] with layer rescaling switched on or off.
pub fn sc_decode_reference_with<T: Likelihood>(
    spec: &CodeSpec,
    probs: &[ProbPair<T>],
    normalize: bool,
) -> Result<ScOutcome<T>> {
    check_input(spec, probs)?;
    let mut state = ReferenceState::new(spec.m(), normalize);
    for (beta, pair) in probs.iter().enumerate() {
        state.p[0].set(flat_index(0, 0, beta), pair.clone());
    }
    let m = spec.m();
    let n = spec.n();
    let mut decision_probs = Vec::with_capacity(n);
    let mut u_hat = Vec::with_capacity(n);
    for phi in 0..n {
        state.calc_p(m, phi)?;
        let top = state.p[m as usize].get(flat_index(m, phi, 0)).clone();
        let bit = spec.frozen_value(phi).unwrap_or_else(|| hard_decision(&top));
        state.b[m as usize].set(flat_index(m, phi, 0), bit);
        if phi % 2 == 1 {
            state.update_b(m, phi);
        }
        decision_probs.push(top);
        u_hat.push(bit);
    }
    let c_hat = (0..n).map(|beta| *state.b[0].get(beta)).collect();
    Ok(ScOutcome {
        u_hat: BitVec::from_bits(u_hat)?,
        c_hat: BitVec::from_bits(c_hat)?,
        decision_probs,
    })
}

struct ReferenceState<T> {
    m: u32,
    normalize: bool,
    p: Vec<Cells<ProbPair<T>>>,
    b: Vec<Cells<u8>>,
}

impl<T: Likelihood> ReferenceState<T> {
    fn new(m: u32, normalize: bool) -> Self {
        let n = 1usize << m;
        ReferenceState {
            m,
            normalize,
            p: (0..=m).map(|_| Cells::new(n, ProbPair::zero())).collect(),
            b: (0..=m).map(|_| Cells::new(n, 0)).collect(),
        }
    }

    fn calc_p(&mut self, lambda: u32, phi: usize) -> Result<()> {
        if lambda == 0 {
            return Ok(());
        }
        let psi = phi / 2;
        if phi % 2 == 0 {
            self.calc_p(lambda - 1, psi)?;
        }
        let (lower, upper) = self.p.split_at_mut(lambda as usize);
        let below = &lower[lambda as usize - 1];
        let here = &mut upper[0];
        let branches = 1usize << (self.m - lambda);
        let mut sigma = T::zero();
        for beta in 0..branches {
            let a = below.get(flat_index(lambda - 1, psi, 2 * beta));
            let b = below.get(flat_index(lambda - 1, psi, 2 * beta + 1));
            let value = if phi % 2 == 0 {
                combine_even(a, b)
            } else {
                let u_even = *self.b[lambda as usize].get(flat_index(lambda, phi - 1, beta));
                combine_odd(a, b, u_even)
            };
            for v in [&value.p0, &value.p1] {
                if *v > sigma {
                    sigma = v.clone();
                }
            }
            here.set(flat_index(lambda, phi, beta), value);
        }
        if self.normalize {
            if sigma.is_zero() {
                return Err(Error::Numeric(format!(
                    "all likelihoods vanished at layer {lambda}, phase {phi}"
                )));
            }
            let scale = T::scale_for(&sigma);
            for beta in 0..branches {
                let cell = here.get_mut(flat_index(lambda, phi, beta));
                cell.p0 = cell.p0.div(&scale);
                cell.p1 = cell.p1.div(&scale);
            }
        }
        Ok(())
    }

    fn update_b(&mut self, lambda: u32, phi: usize) {
        debug_assert!(phi % 2 == 1);
        let psi = phi / 2;
        let (lower, upper) = self.b.split_at_mut(lambda as usize);
        let below = &mut lower[lambda as usize - 1];
        let here = &upper[0];
        for beta in 0..(1usize << (self.m - lambda)) {
            let even = *here.get(flat_index(lambda, phi - 1, beta));
            let odd = *here.get(flat_index(lambda, phi, beta));
            below.set(flat_index(lambda - 1, psi, 2 * beta), even ^ odd);
            below.set(flat_index(lambda - 1, psi, 2 * beta + 1), odd);
        }
        if psi % 2 == 1 {
            self.update_b(lambda - 1, psi);
        }
    }
}

/// The linear-space decoder.
///
/// Layer `lambda` holds `2^(m - lambda)` probability pairs and bit pairs; the
/// phase is dropped from the index and only its parity selects a bit slot.
#[derive(Debug, Clone)]
pub struct ScDecoder<T = f64> {
    m: u32,
    normalize: bool,
    p: Vec<Cells<ProbPair<T>>>,
    c: Vec<BitPairArray>,
}

impl<T: Likelihood> ScDecoder<T> {
    pub fn new(m: u32) -> Self {
        ScDecoder {
            m,
            normalize: true,
            p: (0..=m)
                .map(|l| Cells::new(1usize << (m - l), ProbPair::zero()))
                .collect(),
            c: (0..=m).map(|l| BitPairArray::new(1usize << (m - l))).collect(),
        }
    }

    /// Rescale each freshly computed layer by its largest entry (on by
    /// default). For `f64` the divisor is a power of two, so decisions are
    /// exactly those of unscaled arithmetic without its underflow.
    pub fn with_normalization(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    /// `(probability-pair cells, bit-pair cells)` held by the decoder.
    pub fn cell_counts(&self) -> (usize, usize) {
        (
            self.p.iter().map(Cells::len).sum(),
            self.c.iter().map(BitPairArray::len).sum(),
        )
    }

    pub fn decode(&mut self, spec: &CodeSpec, probs: &[ProbPair<T>]) -> Result<ScOutcome<T>> {
        self.decode_with(spec, probs, |phi, pair| {
            spec.frozen_value(phi).unwrap_or_else(|| hard_decision(pair))
        })
    }

    /// Runs the decoder with a caller-supplied decision for every phase.
    pub fn decode_with<F>(
        &mut self,
        spec: &CodeSpec,
        probs: &[ProbPair<T>],
        mut decide: F,
    ) -> Result<ScOutcome<T>>
    where
        F: FnMut(usize, &ProbPair<T>) -> u8,
    {
        check_input(spec, probs)?;
        if spec.m() != self.m {
            *self = ScDecoder::new(spec.m()).with_normalization(self.normalize);
        }
        let m = self.m;
        let n = spec.n();
        for (beta, pair) in probs.iter().enumerate() {
            self.p[0].set(beta, pair.clone());
        }
        let mut decision_probs = Vec::with_capacity(n);
        let mut u_hat = Vec::with_capacity(n);
        for phi in 0..n {
            self.calc_p(m, phi)?;
            let top = self.p[m as usize].get(0).clone();
            let bit = decide(phi, &top) & 1;
            self.c[m as usize].set(0, phi % 2, bit);
            if phi % 2 == 1 {
                self.update_c(m, phi);
            }
            decision_probs.push(top);
            u_hat.push(bit);
        }
        let c_hat = (0..n).map(|beta| self.c[0].get(beta, 0)).collect();
        Ok(ScOutcome {
            u_hat: BitVec::from_bits(u_hat)?,
            c_hat: BitVec::from_bits(c_hat)?,
            decision_probs,
        })
    }

    fn calc_p(&mut self, lambda: u32, phi: usize) -> Result<()> {
        if lambda == 0 {
            return Ok(());
        }
        let psi = phi / 2;
        if phi % 2 == 0 {
            self.calc_p(lambda - 1, psi)?;
        }
        let (lower, upper) = self.p.split_at_mut(lambda as usize);
        let below = &lower[lambda as usize - 1];
        let here = &mut upper[0];
        let bits = &self.c[lambda as usize];
        let mut sigma = T::zero();
        for beta in 0..here.len() {
            let a = below.get(2 * beta);
            let b = below.get(2 * beta + 1);
            let value = if phi % 2 == 0 {
                combine_even(a, b)
            } else {
                combine_odd(a, b, bits.get(beta, 0))
            };
            if self.normalize {
                for v in [&value.p0, &value.p1] {
                    if *v > sigma {
                        sigma = v.clone();
                    }
                }
            }
            here.set(beta, value);
        }
        if self.normalize {
            if sigma.is_zero() {
                return Err(Error::Numeric(format!(
                    "all likelihoods vanished at layer {lambda}, phase {phi}"
                )));
            }
            let scale = T::scale_for(&sigma);
            for beta in 0..here.len() {
                let cell = here.get_mut(beta);
                cell.p0 = cell.p0.div(&scale);
                cell.p1 = cell.p1.div(&scale);
            }
        }
        Ok(())
    }

    fn update_c(&mut self, lambda: u32, phi: usize) {
        debug_assert!(phi % 2 == 1);
        let psi = phi / 2;
        let (lower, upper) = self.c.split_at_mut(lambda as usize);
        let below = &mut lower[lambda as usize - 1];
        let here = &upper[0];
        for beta in 0..here.len() {
            let even = here.get(beta, 0);
            let odd = here.get(beta, 1);
            below.set(2 * beta, psi % 2, even ^ odd);
            below.set(2 * beta + 1, psi % 2, odd);
        }
        if psi % 2 == 1 {
            self.update_c(lambda - 1, psi);
        }
    }
}

/// Linear-space SC decoding with the hard-decision rule.
pub fn sc_decode<T: Likelihood>(spec: &CodeSpec, probs: &[ProbPair<T>]) -> Result<ScOutcome<T>> {
    ScDecoder::new(spec.m()).decode(spec, probs)
}
