use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Number type for probability and bound arithmetic.
///
/// `f64`/`f32` for speed, [`BigRational`] when a result has to be exact.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    fn from_ratio(num: u128, den: u128) -> Self;
    fn from_u128(v: u128) -> Self {
        Self::from_ratio(v, 1)
    }
    fn as_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: u128, den: u128) -> Self {
        num as f64 / den as f64
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u128, den: u128) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u128, den: u128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Convert a small-integer rational into any scalar.
pub fn from_rational<S: Scalar>(q: crate::Rational) -> S {
    let (n, d) = (*q.numer(), *q.denom());
    let v = S::from_ratio(n.unsigned_abs() as u128, d.unsigned_abs() as u128);
    if (n < 0) != (d < 0) {
        S::zero() - v
    } else {
        v
    }
}
