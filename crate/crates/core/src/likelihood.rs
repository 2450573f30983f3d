//! Scalar types for likelihood values and the two bit-channel combining rules.
//!
//! Decoders are generic over [`Likelihood`] so the same code runs in `f64` for
//! simulation and in exact rationals for small-`n` verification.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::types::ProbPair;

pub trait Likelihood: Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    /// `a * b / 2`
    fn half_product(a: &Self, b: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn div(&self, divisor: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Divisor used to rescale a layer whose largest entry is `max > 0`.
    fn scale_for(max: &Self) -> Self;
}

impl Likelihood for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }

    #[inline]
    fn one() -> Self {
        1.0
    }

    #[inline]
    fn half_product(a: &Self, b: &Self) -> Self {
        0.5 * a * b
    }

    #[inline]
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    #[inline]
    fn div(&self, divisor: &Self) -> Self {
        self / divisor
    }

    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    #[inline]
    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }

    /// Largest power of two not above `max`. Dividing by it is exact, so
    /// rescaled values round exactly like unscaled ones.
    #[inline]
    fn scale_for(max: &Self) -> Self {
        if max.is_normal() {
            f64::from_bits(max.to_bits() & 0xfff0_0000_0000_0000)
        } else {
            *max
        }
    }
}

impl Likelihood for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn half_product(a: &Self, b: &Self) -> Self {
        a * b / BigRational::from_integer(BigInt::from(2))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn div(&self, divisor: &Self) -> Self {
        self / divisor
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn scale_for(max: &Self) -> Self {
        max.clone()
    }
}

/// Even-phase combination: `P[u'] = sum_{u''} 1/2 * a[u' ^ u''] * b[u'']`.
#[inline]
pub fn combine_even<T: Likelihood>(a: &ProbPair<T>, b: &ProbPair<T>) -> ProbPair<T> {
    ProbPair {
        p0: T::half_product(&a.p0, &b.p0).add(&T::half_product(&a.p1, &b.p1)),
        p1: T::half_product(&a.p1, &b.p0).add(&T::half_product(&a.p0, &b.p1)),
    }
}

/// Odd-phase combination given the already-decided even bit `u_even`:
/// `P[u''] = 1/2 * a[u_even ^ u''] * b[u'']`.
#[inline]
pub fn combine_odd<T: Likelihood>(a: &ProbPair<T>, b: &ProbPair<T>, u_even: u8) -> ProbPair<T> {
    ProbPair {
        p0: T::half_product(a.get(u_even), &b.p0),
        p1: T::half_product(a.get(u_even ^ 1), &b.p1),
    }
}
