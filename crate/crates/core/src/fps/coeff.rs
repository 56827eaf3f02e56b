//! Coefficient fields for truncated series.
//!
//! Exact rationals are the working field. The `f64` impl exists so the
//! benchmarks can compare against inexact arithmetic; tests never use it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Field operations needed by the series engine.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_frac(n: i64, d: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; callers guarantee `o` is nonzero.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_frac(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_frac(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Rational to nearest-ish double, robust to numerators and denominators
/// far outside the f64 exponent range.
pub fn q_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (q.numer().abs() >> shift_n as usize).to_f64().unwrap_or(f64::INFINITY);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(f64::INFINITY);
    let v = n / d * 2f64.powi((shift_n - shift_d) as i32);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural log of a positive big integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let b = n.bits() as i64;
    if b < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let s = (b - 900) as usize;
    (n >> s).to_f64().unwrap().ln() + s as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_q(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// n/d as a rational.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let q = Q::new(big.clone() * 3, big * 4);
        assert_eq!(q_to_f64(&q), 0.75);
        let q = Q::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399));
        assert!((q_to_f64(&q) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn log_of_big_values() {
        let n = BigInt::from(10).pow(500);
        assert!((ln_bigint(&n) - 500.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_q(&qf(1, 4)) + 4f64.ln()).abs() < 1e-15);
    }
}
