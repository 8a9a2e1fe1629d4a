//! Scalar fields used for coefficients: exact rationals and `f64`.
//!
//! Every series, block system and solver in the crate is generic over
//! [`Scalar`]. Rational inputs keep the whole pipeline exact; float inputs
//! use relative zero tests.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Relative threshold below which a float coefficient counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// A field of matrix coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn int(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn as_f64(&self) -> f64;

    /// Exact binary value for rationals, identity for floats.
    fn of_f64(v: f64) -> Self;

    fn of_rational(v: &Rational) -> Self;

    fn magnitude(&self) -> f64 {
        self.as_f64().abs()
    }

    /// Zero test against the magnitude `scale` of the surrounding data.
    ///
    /// Exact for rationals; floats use `|x| <= 1e-12 (1 + scale)`.
    fn negligible(&self, scale: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn int(v: i64) -> Self {
        v as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn of_f64(v: f64) -> Self {
        v
    }

    fn of_rational(v: &Rational) -> Self {
        Scalar::as_f64(v)
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_ZERO_TOL * (1.0 + scale)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn of_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Rational::zero)
    }

    fn of_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn magnitude(&self) -> f64 {
        Scalar::as_f64(&self.abs())
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Shorthand for `Rational::new(num, den)`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::ratio(num, den)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only when it lies within `tol * (1 + |x|)` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    // continued-fraction convergents h/k
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rem = x;
    let mut best = None;
    for _ in 0..64 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        best = Some((h1, k1));
        if (approx - x).abs() <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
        let frac = rem - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
    }
    let (h, k) = best?;
    let value = h as f64 / k as f64;
    if (value - x).abs() <= tol * (1.0 + x.abs()) {
        Some(Rational::new(BigInt::from(h), BigInt::from(k)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5, 1000, 1e-12), Some(q(1, 2)));
        assert_eq!(rationalize(-1.0 / 3.0, 1000, 1e-12), Some(q(-1, 3)));
        assert_eq!(rationalize(4671.0 / 5324.0, 10_000, 1e-12), Some(q(4671, 5324)));
        assert_eq!(rationalize(7.0, 10, 1e-12), Some(q(7, 1)));
    }

    #[test]
    fn rationalize_rejects_irrationals_with_small_denominator() {
        assert!(rationalize(std::f64::consts::PI, 100, 1e-12).is_none());
    }

    #[test]
    fn float_zero_test_is_relative() {
        assert!(1e-13.negligible(0.0));
        assert!(!1e-9.negligible(1.0));
        assert!(1e-9.negligible(1e4));
        assert!(!q(1, 1_000_000).negligible(1e9));
    }
}
