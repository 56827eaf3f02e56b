//! Truncated Laurent series with finitely many negative powers.
//!
//! A value is `z^val * (a_0 + a_1 z + ...)` known modulo `z^prec`. Used where
//! two terms with simple poles at the origin must cancel exactly.

use super::coeff::{Coeff, Q};
use super::series::Series;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C: Coeff = Q> {
    val: i64,
    coeffs: Vec<C>,
}

impl<C: Coeff> Laurent<C> {
    /// `z^val * s`; absolute precision `val + order(s) + 1`.
    pub fn new(val: i64, s: Series<C>) -> Self {
        Laurent { val, coeffs: s.into_coeffs() }
    }

    pub fn from_series(s: Series<C>) -> Self {
        Laurent::new(0, s)
    }

    /// Exponent up to which coefficients are known (exclusive).
    pub fn prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> C {
        let i = e - self.val;
        if i < 0 || i >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    fn from_range(lo: i64, prec: i64, f: impl Fn(i64) -> C) -> Self {
        Laurent { val: lo, coeffs: (lo..prec).map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let lo = self.val.min(o.val);
        let prec = self.prec().min(o.prec());
        Laurent::from_range(lo, prec.max(lo + 1), |e| self.coeff(e).add(&o.coeff(e)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let lo = self.val.min(o.val);
        let prec = self.prec().min(o.prec());
        Laurent::from_range(lo, prec.max(lo + 1), |e| self.coeff(e).sub(&o.coeff(e)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let val = self.val + o.val;
        let prec = (self.val + o.prec()).min(o.val + self.prec());
        let n = (prec - val).max(1) as usize;
        let a = Series::new(self.coeffs.iter().take(n).cloned().collect());
        let b = Series::new(o.coeffs.iter().take(n).cloned().collect());
        Laurent::new(val, a.mul(&b))
    }

    /// Reciprocal; the leading stored coefficient must be nonzero.
    pub fn recip(&self) -> Result<Self> {
        let s = Series::new(self.coeffs.clone());
        Ok(Laurent::new(-self.val, s.recip()?))
    }

    /// Converts to a power series, requiring every negative power to vanish exactly.
    pub fn into_series(self) -> Result<Series<C>> {
        for e in self.val..0 {
            if !self.coeff(e).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "principal part survives at z^{e}: {:?}",
                    self.coeff(e)
                )));
            }
        }
        if self.prec() <= 0 {
            return Err(Error::OrderOutOfRange { requested: 0, available: 0 });
        }
        let start = (-self.val).max(0) as usize;
        let mut out: Vec<C> = vec![C::zero(); self.val.max(0) as usize];
        out.extend(self.coeffs[start..].iter().cloned());
        Ok(Series::new(out))
    }
}
