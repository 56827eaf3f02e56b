//! Exact moments of `p_k` under `M_N` without enumerating signatures.
//!
//! With `l_i = lambda_i + N - i`, the weight `M_N(lambda)` factors as
//! `det[C(l_i, j)] * det[phi_{l_i - N + k}]`, so by Cauchy-Binet the sum of
//! `M_N(lambda) exp(eps sum_i F(l_i))` over all signatures is the determinant
//! of the `N x N` Gram matrix `G_{jk} = sum_l C(l, j) phi_{l-N+k} exp(eps F(l))`.
//! With `F(l) = (l - N + 1/2)^k` and `eps` nilpotent of order three, the
//! determinant carries the mass and the first two moments of `p_k + const`.
//! Entries are scaled to integers and the determinant is taken by
//! fraction-free elimination over `Z[theta]/theta^3`.

use super::MASS_TOL;
use crate::charparams::{log_phi_series, OmegaParams};
use crate::error::{Error, Result};
use crate::fps::{ln_bigint, q_to_f64, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Element `a0 + a1 theta + a2 theta^2` of `Z[theta]/theta^3`.
type T3 = [BigInt; 3];

/// Exact ring arithmetic for fraction-free elimination.
trait Ring: Clone + Send + Sync {
    /// True when the element is a unit over `Q`, i.e. has nonzero constant term.
    fn usable(&self) -> bool;
    /// `(a d - b c) / e`, exact.
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, e: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for BigInt {
    fn usable(&self) -> bool {
        !self.is_zero()
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, e: &Self) -> Self {
        (a * d - b * c) / e
    }
    fn neg(&self) -> Self {
        -self
    }
}

fn t3_mul(a: &T3, b: &T3) -> T3 {
    [&a[0] * &b[0], &a[0] * &b[1] + &a[1] * &b[0], &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0]]
}

impl Ring for T3 {
    fn usable(&self) -> bool {
        !self[0].is_zero()
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, e: &Self) -> Self {
        let ad = t3_mul(a, d);
        let bc = t3_mul(b, c);
        let n = [&ad[0] - &bc[0], &ad[1] - &bc[1], &ad[2] - &bc[2]];
        let q0 = &n[0] / &e[0];
        let q1 = (&n[1] - &q0 * &e[1]) / &e[0];
        let q2 = (&n[2] - &q0 * &e[2] - &q1 * &e[1]) / &e[0];
        [q0, q1, q2]
    }
    fn neg(&self) -> Self {
        [-&self[0], -&self[1], -&self[2]]
    }
}

/// Determinant by Bareiss elimination, pivoting on usable entries.
/// Returns `None` when no usable pivot exists.
fn bareiss<T: Ring>(mut m: Vec<Vec<T>>, one: T) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(one);
    }
    let mut prev = one;
    let mut negate = false;
    for c in 0..n - 1 {
        let p = (c..n).find(|&r| m[r][c].usable())?;
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot_row = &top[c];
        let prev_ref = &prev;
        rest.par_iter_mut().for_each(|row| {
            for j in c + 1..n {
                row[j] = T::cross_div(&pivot_row[c], &row[j], &row[c], &pivot_row[j], prev_ref);
            }
        });
        prev = m[c][c].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if !d.usable() {
        return None;
    }
    Some(if negate { d.neg() } else { d })
}

/// Integer kernel of the Gram entries: `phi` sums scaled by a common factor.
enum Kernel {
    /// `phi_j = exp(ln_c) r[j - shift] / scale`, summed over `0 <= l <= top`.
    Truncated { r: Vec<BigInt>, shift: i64, top: i64 },
    /// `sum_l q(l) phi_{l-a} = sum_i (Delta^i q)(a) c[i] / scale`.
    Full { c: Vec<BigInt> },
}

fn lcm_of_denoms(qs: &[Q]) -> BigInt {
    qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn integerize(qs: &[Q], d: &BigInt) -> Vec<BigInt> {
    qs.iter().map(|q| (q * Q::from_integer(d.clone())).to_integer()).collect()
}

/// Data shared by every Gram matrix of one `(params, N, cutoff)` run.
struct GramSetup {
    n: usize,
    kernel: Kernel,
    /// Pascal table `binom[l][j] = C(l, j)` for `0 <= j < N`.
    binom: Vec<Vec<BigInt>>,
    /// `ln` of the factor that turns the integer kernel into `phi`.
    ln_factor: f64,
}

impl GramSetup {
    fn new(params: &OmegaParams, n: usize, cutoff: Option<i64>, max_deg: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        let (kernel, ln_factor, l_max) = match cutoff {
            Some(cut) => {
                if cut < 0 {
                    return Err(Error::InvalidParams(format!("cutoff must be nonnegative, got {cut}")));
                }
                let top = cut + n as i64 - 1;
                let ps = super::phi_scaled(params, top as usize)?;
                let d = lcm_of_denoms(&ps.r);
                let ln_factor = ps.ln_c - ln_bigint(&d);
                (Kernel::Truncated { r: integerize(&ps.r, &d), shift: ps.shift as i64, top }, ln_factor, top as usize)
            }
            None => {
                let order = n - 1 + max_deg;
                let c = log_phi_series(params, order)?.exp0()?.into_coeffs();
                let d = lcm_of_denoms(&c);
                let l_max = n - 1 + order;
                (Kernel::Full { c: integerize(&c, &d) }, -ln_bigint(&d), l_max)
            }
        };
        let mut binom: Vec<Vec<BigInt>> = Vec::with_capacity(l_max + 1);
        for l in 0..=l_max {
            let row: Vec<BigInt> = (0..n)
                .map(|j| match j {
                    0 => BigInt::one(),
                    _ if j > l => BigInt::zero(),
                    _ => &binom[l - 1][j - 1] + &binom[l - 1][j],
                })
                .collect();
            binom.push(row);
        }
        Ok(GramSetup { n, kernel, binom, ln_factor })
    }

    /// `sum_l q(l) phi_{l-N+k}` in integer scale, for column `k` in `1..=N`.
    fn entry(&self, k: usize, q: &impl Fn(i64) -> BigInt, deg: usize) -> BigInt {
        let a = self.n as i64 - k as i64;
        match &self.kernel {
            Kernel::Truncated { r, shift, top } => {
                let m_max = top - a - shift;
                (0..=m_max.max(-1)).map(|m| q(m + a + shift) * &r[m as usize]).sum()
            }
            Kernel::Full { c } => {
                // forward differences of q at a
                let mut vals: Vec<BigInt> = (0..=deg as i64).map(|t| q(a + t)).collect();
                let mut acc = BigInt::zero();
                for ci in c.iter().take(deg + 1) {
                    acc += &vals[0] * ci;
                    for t in 0..vals.len() - 1 {
                        vals[t] = &vals[t + 1] - &vals[t];
                    }
                    vals.pop();
                }
                acc
            }
        }
    }

    fn binom(&self, l: i64, j: usize) -> BigInt {
        if l < 0 {
            BigInt::zero()
        } else {
            self.binom[l as usize][j].clone()
        }
    }

    /// Integer determinant of the plain Gram matrix.
    fn det0(&self) -> Option<BigInt> {
        let rows: Vec<Vec<BigInt>> = (0..self.n)
            .into_par_iter()
            .map(|j| (1..=self.n).map(|k| self.entry(k, &|l| self.binom(l, j), j)).collect())
            .collect();
        bareiss(rows, BigInt::one()).map(|d| if self.flip() { -d } else { d })
    }

    /// `det[C(l_i, j)]` over decreasing `l_i` carries `(-1)^{N(N-1)/2}`.
    fn flip(&self) -> bool {
        (self.n * (self.n - 1) / 2) % 2 == 1
    }

    /// Determinant over `Z[theta]/theta^3` with weight `exp(2 f theta)`,
    /// `f(l) = (2l - 2N + 1)^p`, truncated after `theta^2`.
    fn det_theta(&self, p: u32) -> Option<T3> {
        let n = self.n as i64;
        let f = |l: i64| BigInt::from(2 * l - 2 * n + 1).pow(p);
        let pd = p as usize;
        let rows: Vec<Vec<T3>> = (0..self.n)
            .into_par_iter()
            .map(|j| {
                (1..=self.n)
                    .map(|k| {
                        let e0 = self.entry(k, &|l| self.binom(l, j), j);
                        let e1 = self.entry(k, &|l| self.binom(l, j) * f(l), j + pd);
                        let e2 = self.entry(k, &|l| self.binom(l, j) * f(l).pow(2), j + 2 * pd);
                        [e0, e1 * 2, e2 * 2]
                    })
                    .collect()
            })
            .collect();
        let zero = || BigInt::zero();
        bareiss(rows, [BigInt::one(), zero(), zero()]).map(|d| if self.flip() { d.neg() } else { d })
    }
}

/// Total `M_N` mass of signatures with `0 <= lambda_N` and `lambda_1 <= cutoff`
/// (plus-only parameters).
pub fn captured_mass(params: &OmegaParams, n: usize, cutoff: i64) -> Result<f64> {
    let setup = GramSetup::new(params, n, Some(cutoff), 0)?;
    let d0 = setup.det0().ok_or_else(|| Error::Inconsistent("zero mass in the truncated table".into()))?;
    if d0.is_negative() {
        return Err(Error::Inconsistent("negative truncated mass".into()));
    }
    Ok((n as f64 * setup.ln_factor + ln_bigint(&d0)).exp())
}

/// Exact `(E[p_k], E[p_k^2])` under `M_N`, restricted to `lambda_1 <= cutoff`
/// and renormalized when a cutoff is given, over all signatures otherwise.
pub fn gram_moments(params: &OmegaParams, n: usize, cutoff: Option<i64>, k: u32) -> Result<(Q, Q)> {
    if k == 0 {
        return Err(Error::InvalidParams("moment order must be at least 1".into()));
    }
    let setup = GramSetup::new(params, n, cutoff, 2 * k as usize)?;
    moments_from_setup(&setup, k)
}

fn moments_from_setup(setup: &GramSetup, k: u32) -> Result<(Q, Q)> {
    let [d0, d1, d2] = setup.det_theta(k).ok_or_else(|| Error::Inconsistent("zero mass".into()))?;
    let two = BigInt::from(2);
    let e_f = Q::new(d1, &d0 * two.pow(k + 1));
    let e_f2 = Q::new(d2, &d0 * two.pow(2 * k + 1));
    // c = sum_i (1/2 - i)^k
    let c: Q = (1..=setup.n as i64).map(|i| Q::new(BigInt::from(1 - 2 * i).pow(k), two.pow(k))).sum();
    let e1 = &e_f - &c;
    let e2 = &e_f2 - Q::from_integer(two) * &c * &e_f + &c * &c;
    Ok((e1, e2))
}

/// One scaled moment pair of the oracle summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleMoment {
    pub k: u32,
    #[serde(rename = "scaled_E")]
    pub scaled_e: f64,
    #[serde(rename = "scaled_E2")]
    pub scaled_e2: f64,
}

/// `E_N[p_k]/N^{k+1}` and `E_N[p_k^2]/N^{2(k+1)}` for `k = 1..=k_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub cutoff: Option<i64>,
    pub captured_mass: f64,
    pub moments: Vec<OracleMoment>,
}

/// Scaled oracle moments. With a cutoff the table is truncated at
/// `lambda_1 <= cutoff` and must capture at least `1 - delta`; without one
/// the expectations are over the full measure.
pub fn oracle_summary(
    params: &OmegaParams,
    n: usize,
    cutoff: Option<i64>,
    delta: f64,
    k_max: u32,
) -> Result<OracleSummary> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must lie in [0, 1), got {delta}")));
    }
    let mass = match cutoff {
        Some(cut) => {
            let m = captured_mass(params, n, cut)?;
            if m > 1.0 + MASS_TOL {
                return Err(Error::Inconsistent(format!("captured mass {m} exceeds 1")));
            }
            if m < 1.0 - delta {
                return Err(Error::IncreaseCutoff { captured: m, required: 1.0 - delta });
            }
            m
        }
        None => 1.0,
    };
    let setup = GramSetup::new(params, n, cutoff, 2 * k_max as usize)?;
    let nq = Q::from_integer(BigInt::from(n));
    let moments = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let (e1, e2) = moments_from_setup(&setup, k)?;
            let s = nq.pow(k as i32 + 1);
            Ok(OracleMoment { k, scaled_e: q_to_f64(&(e1 / &s)), scaled_e2: q_to_f64(&(e2 / (&s * &s))) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleSummary { n, cutoff, captured_mass: mass, moments })
}
