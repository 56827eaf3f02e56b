//! Moments of the limit measure from the Taylor data of `P'`.
//!
//! Three independent routes compute the same numbers:
//! - `Inverse`: `S = log(1 + v0)`, `v0 = (z/Q)^{(-1)}`, `m_k = [z^{k+1}] S`.
//! - `Nc`: `c_k` as noncrossing-partition weight sums, then
//!   `m~_k = [z^{k+1}] log((z/C)^{(-1)}/z)` with `C = 1 + sum c_k z^{k+1}`.
//! - `Lagrange`: the same `C`-route with every inversion done by Lagrange
//!   coefficient extraction instead of [`Series::inverse`].

use crate::charparams::TSeries;
use crate::error::{Error, Result};
use crate::fps::{lagrange_coeff, q_to_f64, qf, qi, Series, Q};
use crate::ncomb;
use num_traits::{Signed, Zero};

/// Which construction produces the moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Inverse,
    Nc,
    Lagrange,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Inverse => "inverse",
            Route::Nc => "nc",
            Route::Lagrange => "lagrange",
        }
    }

    pub fn from_name(s: &str) -> Result<Route> {
        match s {
            "inverse" => Ok(Route::Inverse),
            "nc" => Ok(Route::Nc),
            "lagrange" => Ok(Route::Lagrange),
            other => Err(Error::InvalidParams(format!("unknown route {other:?}"))),
        }
    }
}

/// `(-1)^k / (k+1)`: moments of the uniform measure on `[-1, 0]`.
pub fn trivial_moment(k: usize) -> Q {
    let s = if k % 2 == 0 { 1 } else { -1 };
    qf(s, k as i64 + 1)
}

/// `Q(z) = 1 + z(1+z) P'(z)`, exact to order `order <= K`.
pub fn q_series(t: &TSeries, order: usize) -> Result<Series> {
    if order > t.len() {
        return Err(Error::OrderOutOfRange { requested: order, available: t.len() });
    }
    let p = t.series();
    let zp = p.shift_up(1);
    let z2p = p.shift_up(2);
    let q = Series::one(t.len()).add(&zp).add(&z2p);
    q.truncate(order)
}

/// `v0 = (z/Q)^{(-1)}` to order `order <= K + 1`.
pub fn v0_series(t: &TSeries, order: usize) -> Result<Series> {
    if order == 0 || order > t.len() + 1 {
        return Err(Error::OrderOutOfRange { requested: order, available: t.len() + 1 });
    }
    let q = q_series(t, order - 1)?;
    q.recip()?.shift_up(1).inverse()
}

/// `c_k = (1/(k+1)) [u^k] (1 + t_1 u + t_2 u^2 + ...)^{k+1}`.
pub fn c_coefficient(t: &TSeries, k: usize) -> Result<Q> {
    if k > t.len() {
        return Err(Error::OrderOutOfRange { requested: k, available: t.len() });
    }
    let s = s_series(t, k);
    Ok(s.pow(k as u32 + 1).coeff(k) / qi(k as i64 + 1))
}

/// `s(u) = 1 + t_1 u + ... + t_k u^k`.
fn s_series(t: &TSeries, k: usize) -> Series {
    Series::from_fn(k, |i| if i == 0 { qi(1) } else { t.t(i).clone() })
}

/// `C(z) = 1 - z + (z/s(z))^{(-1)}`, order `K + 1`.
pub fn c_series(t: &TSeries, k: usize) -> Result<Series> {
    let zs = s_series(t, k).recip()?.shift_up(1);
    let inv = zs.inverse()?;
    Ok(add_at(&add_at(&inv, 0, &qi(1)), 1, &qi(-1)))
}

fn add_at(s: &Series, i: usize, c: &Q) -> Series {
    let mut v = s.coeffs().to_vec();
    v[i] += c;
    Series::new(v)
}

/// `C(z)` assembled from a list `c_1..c_K`.
fn c_from_list(c: &[Q]) -> Series {
    let mut v = vec![qi(1), qi(0)];
    v.extend(c.iter().cloned());
    Series::new(v)
}

/// `m~_k = [z^{k+1}] log((z/C)^{(-1)}/z)`, by series inversion.
fn m_bar_by_inverse(c: &[Q]) -> Result<Vec<Q>> {
    let k = c.len();
    let cz = c_from_list(c);
    let w = cz.recip()?.shift_up(1).inverse()?;
    let e = w.shift_down(1)?;
    let a = add_at(&e, 0, &qi(-1)).log1p()?;
    Ok((1..=k).map(|j| a.coeff(j + 1).clone()).collect())
}

/// Same as [`m_bar_by_inverse`] with the inverse taken coefficientwise by Lagrange.
fn m_bar_by_lagrange(c: &[Q]) -> Result<Vec<Q>> {
    let k = c.len();
    let cz = c_from_list(c);
    let f = cz.recip()?.shift_up(1);
    // (z/C)^{(-1)} / z = sum_{n>=1} [z^n] (z/C)^{(-1)} z^{n-1}
    let mut e = vec![qi(1)];
    for n in 2..=k + 2 {
        e.push(lagrange_coeff(&f, n, 1)?);
    }
    let a = add_at(&Series::new(e), 0, &qi(-1)).log1p()?;
    Ok((1..=k).map(|j| a.coeff(j + 1).clone()).collect())
}

/// `m_1..m_K` along one route.
pub fn moments_by_route(t: &TSeries, k: usize, route: Route) -> Result<Vec<Q>> {
    if k == 0 || k > t.len() {
        return Err(Error::OrderOutOfRange { requested: k, available: t.len() });
    }
    match route {
        Route::Inverse => {
            let s = v0_series(t, k + 1)?.log1p()?;
            Ok((1..=k).map(|j| s.coeff(j + 1).clone()).collect())
        }
        Route::Nc => {
            if k > ncomb::MAX_ENUM_K {
                return Err(Error::OrderOutOfRange { requested: k, available: ncomb::MAX_ENUM_K });
            }
            let c: Vec<Q> = (1..=k).map(|j| ncomb::weight_sum(j, t)).collect::<Result<_>>()?;
            let mb = m_bar_by_inverse(&c)?;
            Ok(mb.into_iter().enumerate().map(|(i, v)| v + trivial_moment(i + 1)).collect())
        }
        Route::Lagrange => {
            let zs = s_series(t, k).recip()?.shift_up(1);
            let c: Vec<Q> =
                (1..=k).map(|j| lagrange_coeff(&zs, j + 1, 1)).collect::<Result<_>>()?;
            let mb = m_bar_by_lagrange(&c)?;
            Ok(mb.into_iter().enumerate().map(|(i, v)| v + trivial_moment(i + 1)).collect())
        }
    }
}

/// Every moment-side sequence of one `P'`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentData {
    pub t: TSeries,
    pub c: Vec<Q>,
    pub m: Vec<Q>,
    pub m_tilde: Vec<Q>,
    pub m_bar: Vec<Q>,
    /// `C1` with `|m_k| <= C1^k` on the stored prefix.
    pub growth: f64,
}

/// Runs the main route and the `C(z)` route and checks that they agree.
pub fn moments(t: &TSeries, k: usize) -> Result<MomentData> {
    let m = moments_by_route(t, k, Route::Inverse)?;
    let m_tilde: Vec<Q> = m.iter().enumerate().map(|(i, v)| v - trivial_moment(i + 1)).collect();
    let c: Vec<Q> = (1..=k).map(|j| c_coefficient(t, j)).collect::<Result<_>>()?;

    let cz = c_series(t, k)?;
    if cz.coeffs()[2..] != c[..] || !cz.coeff(1).is_zero() {
        return Err(Error::Inconsistent("C(z) disagrees with the c_k formula".into()));
    }
    let m_bar = m_bar_by_inverse(&c)?;
    if m_bar != m_tilde {
        return Err(Error::Inconsistent("m_bar differs from m_tilde".into()));
    }
    check_v0_c_identity(t, &c)?;

    let growth = m
        .iter()
        .enumerate()
        .map(|(i, v)| q_to_f64(&v.abs()).powf(1.0 / (i as f64 + 1.0)))
        .fold(1.0, f64::max);
    Ok(MomentData { t: t.truncate(k)?, c, m, m_tilde, m_bar, growth })
}

/// `(z/Q)^{(-1)} + 1 = ((z+1)/z) (z/C)^{(-1)}`, exactly.
pub fn check_v0_c_identity(t: &TSeries, c: &[Q]) -> Result<()> {
    let k = c.len();
    let lhs = add_at(&v0_series(t, k + 1)?, 0, &qi(1));
    let w = c_from_list(c).recip()?.shift_up(1).inverse()?;
    let one_plus_z = Series::from_fn(k + 1, |i| if i <= 1 { qi(1) } else { qi(0) });
    let rhs = w.shift_down(1)?.mul(&one_plus_z);
    if lhs != rhs {
        return Err(Error::Inconsistent("identity (z/Q)^(-1) + 1 = ((z+1)/z)(z/C)^(-1) fails".into()));
    }
    Ok(())
}
