//! Quantized free convolution: moments and `P'` determine each other, and
//! convolution adds the `P'` series.

use crate::charparams::{p_prime_series, LimitParams, TSeries};
use crate::error::{Error, Result};
use crate::fps::{qi, Laurent, Series, Q};
use crate::limitshape::{moments_by_route, Route};

/// A limit measure given by its moments `m_1..m_K` and its linearization `P'`.
#[derive(Clone, Debug, PartialEq)]
pub struct QfcMeasure {
    m: Vec<Q>,
    p_prime: TSeries,
}

impl QfcMeasure {
    /// From `t_1..t_K`.
    pub fn from_pprime(p_prime: TSeries) -> Result<Self> {
        let k = p_prime.len();
        let m = moments_from_pprime(&p_prime, k)?;
        Ok(QfcMeasure { m, p_prime })
    }

    /// From `m_1..m_K`.
    pub fn from_moments(m: Vec<Q>) -> Result<Self> {
        let k = m.len();
        let p_prime = pprime_from_moments(&m, k)?;
        Ok(QfcMeasure { m, p_prime })
    }

    /// From limit-shape parameters, to order `k`.
    pub fn from_limit(lim: &LimitParams, k: usize) -> Result<Self> {
        QfcMeasure::from_pprime(p_prime_series(lim, k)?)
    }

    pub fn moments(&self) -> &[Q] {
        &self.m
    }

    pub fn p_prime(&self) -> &TSeries {
        &self.p_prime
    }

    /// Number of known moments.
    pub fn order(&self) -> usize {
        self.m.len()
    }
}

/// `m_1..m_K` of the measure whose `P'` is `p`; the limit-shape moment route.
pub fn moments_from_pprime(p: &TSeries, k: usize) -> Result<Vec<Q>> {
    moments_by_route(p, k, Route::Inverse)
}

/// `P'(z) = 1/((1+z) (exp(S) - 1)^{(-1)}) - 1/(z(1+z))` with
/// `S(z) = z + m_1 z^2 + ... + m_K z^{K+1}`; returns `t_1..t_K`.
pub fn pprime_from_moments(m: &[Q], k: usize) -> Result<TSeries> {
    if k == 0 || k > m.len() {
        return Err(Error::OrderOutOfRange { requested: k, available: m.len() });
    }
    let mut s = vec![qi(0), qi(1)];
    s.extend(m[..k].iter().cloned());
    let s = Series::new(s);
    let u = s.exp0()?.sub(&Series::one(s.order())).inverse()?;
    let first = Laurent::new(1, u.shift_down(1)?.mul(&one_plus_z(k))).recip()?;
    let second = Laurent::new(-1, Series::geometric(&qi(-1), k));
    let p = first.sub(&second).into_series()?.truncate(k - 1)?;
    Ok(TSeries::from_t(p.into_coeffs()))
}

fn one_plus_z(order: usize) -> Series {
    Series::from_fn(order, |i| qi(i64::from(i <= 1)))
}

/// Quantized free convolution: the `P'` series add.
pub fn convolve(a: &QfcMeasure, b: &QfcMeasure) -> Result<QfcMeasure> {
    let k = a.order().min(b.order());
    QfcMeasure::from_pprime(a.p_prime.truncate(k)?.add(&b.p_prime.truncate(k)?))
}

/// `P'(z) = R(log(1+z))/(1+z) + 1/((1+z) log(1+z)) - 1/(z(1+z))` from the
/// Taylor coefficients of Voiculescu's R-function; returns `t_1..t_K`.
pub fn pprime_from_rfunction(r: &Series, k: usize) -> Result<TSeries> {
    if k == 0 {
        return Err(Error::OrderOutOfRange { requested: 0, available: r.order() + 1 });
    }
    if r.order() + 1 < k {
        return Err(Error::OrderOutOfRange { requested: k, available: r.order() + 1 });
    }
    let log = Series::<Q>::var(k + 1).log1p()?;
    let geo = Series::geometric(&qi(-1), k + 1);
    let r_part = r.truncate(k - 1)?.compose(&log.truncate(k - 1)?)?;
    let r_term = Laurent::from_series(r_part.mul(&geo.truncate(k - 1)?));
    let log_term = Laurent::new(1, log.shift_down(1)?.mul(&one_plus_z(k))).recip()?;
    let pole = Laurent::new(-1, geo);
    let p = r_term.add(&log_term.sub(&pole)).into_series()?.truncate(k - 1)?;
    Ok(TSeries::from_t(p.into_coeffs()))
}
