//! Exact finite-N oracle: the coherent measure `M_N` on signatures, the
//! statistics `mu_lambda`, `p_k` and `w_lambda`, and empirical moments.
//!
//! `M_N(lambda) = Dim_N(lambda) det[phi_{lambda_i - i + j}]`, the expansion of
//! `prod_i Phi(u_i)` in normalized Schur functions.

pub mod gram;

use crate::charparams::OmegaParams;
use crate::error::{Error, Result};
use crate::fps::{ln_bigint, ln_q, q_to_f64, qi, Series, Q};
use crate::io::fmt_num;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;

pub use gram::{captured_mass, gram_moments, oracle_summary, OracleMoment, OracleSummary};

/// Allowed overshoot of the captured mass above 1.
pub const MASS_TOL: f64 = 1e-12;

/// A weakly decreasing integer N-tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    parts: Vec<i64>,
}

impl Signature {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParams("a signature needs at least one part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Signature { parts })
    }

    pub fn zero(n: usize) -> Self {
        Signature { parts: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    /// Weyl dimension `prod_{i<j} (l_i - l_j)/(j - i)` with `l_i = lambda_i - i`.
    pub fn dim(&self) -> BigInt {
        let n = self.n();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..n {
            for j in i + 1..n {
                num *= BigInt::from(self.parts[i] - self.parts[j] + (j - i) as i64);
                den *= BigInt::from((j - i) as i64);
            }
        }
        num / den
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("|"))
    }
}

/// `phi_k = exp(ln_c) r_{k - shift}` for plus-only parameters, with `r_m`
/// the exact Taylor coefficients of
/// `R(u) = e^{gamma u} prod (1 + beta' u) / prod (1 - alpha' u)`,
/// `beta' = beta/(1-beta)`, `alpha' = alpha/(1+alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiScaled {
    pub ln_c: f64,
    pub shift: usize,
    pub r: Vec<Q>,
}

impl PhiScaled {
    /// `r_m`, zero for negative `m`.
    pub fn r_at(&self, m: i64) -> Q {
        if m < 0 {
            Q::zero()
        } else {
            self.r.get(m as usize).cloned().unwrap_or_else(Q::zero)
        }
    }

    /// Exact `phi_k / exp(ln_c)`.
    pub fn scaled(&self, k: i64) -> Q {
        self.r_at(k - self.shift as i64)
    }
}

/// Exact scaled Taylor data of `Phi` up to `r_order`.
pub fn phi_scaled(params: &OmegaParams, r_order: usize) -> Result<PhiScaled> {
    if !params.is_plus_only() {
        return Err(Error::InvalidParams("exact Taylor coefficients need plus-only parameters".into()));
    }
    let one = qi(1);
    let u = Series::<Q>::var(r_order);
    let mut log_r = u.scale(params.gamma_plus());
    let mut ln_c = -q_to_f64(params.gamma_plus());
    let mut shift = 0usize;
    for p in params.beta_plus() {
        if p.value == one {
            shift += p.mult as usize;
        } else if !p.value.is_zero() {
            let b = &p.value / (&one - &p.value);
            log_r = log_r.add(&u.scale(&b).log1p()?.scale(&qi(p.mult as i64)));
            ln_c += p.mult as f64 * ln_q(&(&one - &p.value));
        }
    }
    for p in params.alpha_plus() {
        if !p.value.is_zero() {
            let a = &p.value / (&one + &p.value);
            log_r = log_r.sub(&u.scale(&-a).log1p()?.scale(&qi(p.mult as i64)));
            ln_c -= p.mult as f64 * ln_q(&(&one + &p.value));
        }
    }
    Ok(PhiScaled { ln_c, shift, r: log_r.exp0()?.into_coeffs() })
}

/// Values of `Phi(u)` on complex `u`.
fn phi_eval(params: &OmegaParams, u: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let v = one / u;
    let mut log = q_to_f64(params.gamma_plus()) * (u - one) + q_to_f64(params.gamma_minus()) * (v - one);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in params.beta_plus() {
        acc += p.mult as f64 * (one + q_to_f64(&p.value) * (u - one)).ln();
    }
    for p in params.alpha_plus() {
        acc -= p.mult as f64 * (one - q_to_f64(&p.value) * (u - one)).ln();
    }
    for p in params.beta_minus() {
        acc += p.mult as f64 * (one + q_to_f64(&p.value) * (v - one)).ln();
    }
    for p in params.alpha_minus() {
        acc -= p.mult as f64 * (one - q_to_f64(&p.value) * (v - one)).ln();
    }
    log += acc;
    log.exp()
}

/// `phi_k` for `k_min <= k <= k_max` in double precision.
///
/// Plus-only parameters use the exact Taylor data; otherwise the Laurent
/// coefficients come from the trapezoid rule on the unit circle, and the
/// call fails unless they sum to `Phi(1) = 1` within `1e-10`.
pub fn phi_coeffs(params: &OmegaParams, k_min: i64, k_max: i64) -> Result<Vec<f64>> {
    if k_min > k_max {
        return Err(Error::InvalidParams(format!("empty range {k_min}..={k_max}")));
    }
    if params.is_plus_only() {
        let ps = phi_scaled(params, k_max.max(0) as usize)?;
        let c = ps.ln_c.exp();
        return Ok((k_min..=k_max).map(|k| c * q_to_f64(&ps.scaled(k))).collect());
    }
    let span = (k_max.abs().max(k_min.abs()) as usize + 64).next_power_of_two();
    let m = (8 * span).max(4096);
    let samples: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|j| phi_eval(params, Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)))
        .collect();
    let coeffs: Vec<f64> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * j as i64) as f64 / m as f64))
                .sum();
            s.re / m as f64
        })
        .collect();
    let total: f64 = coeffs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Precision(format!(
            "Laurent coefficients on {k_min}..={k_max} sum to {total}, not 1; widen the range"
        )));
    }
    Ok(coeffs)
}

/// One table row.
#[derive(Clone, Debug, PartialEq)]
pub struct GtEntry {
    pub sig: Signature,
    pub prob: f64,
    /// `Dim det[r]` when the table is exact; `prob = exp(log_scale) weight`.
    pub weight: Option<Q>,
}

/// Truncated table of `M_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct GtMeasure {
    pub n: usize,
    pub cutoff: i64,
    pub entries: Vec<GtEntry>,
    pub captured_mass: f64,
    /// `N ln C` for exact tables.
    pub log_scale: f64,
}

/// Weakly decreasing tuples of length `n` in `[lo, hi]` with `sum |parts| = size`,
/// in lexicographic order.
fn signatures_of_size(n: usize, lo: i64, hi: i64, size: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, lo: i64, hi: i64, size: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            if size == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let left = (n - prefix.len()) as i64;
        for v in lo..=hi {
            let rest = size - v.abs();
            // the remaining parts are <= v, and each costs at least min |x| over [lo, v]
            let min_each = if lo <= 0 && v >= 0 { 0 } else { v.abs().min(lo.abs()) };
            let max_each = lo.abs().max(v.abs());
            if rest < 0 || rest < min_each * (left - 1) || rest > max_each * (left - 1) {
                continue;
            }
            prefix.push(v);
            rec(n, lo, v, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, lo, hi, size, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Exact determinant of a small rational matrix by Gaussian elimination.
fn det_q(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut det = qi(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for j in c + 1..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

/// Double-precision determinant with partial pivoting.
fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c + 1..n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    det
}

/// Builds the table level by level in `sum |lambda_i|` until the captured
/// mass reaches `1 - delta`.
///
/// Plus-only parameters give exact weights and nonnegative signatures;
/// otherwise `lambda_N >= -cutoff` too and the weights are double precision.
pub fn measure_table(params: &OmegaParams, n: usize, cutoff: i64, delta: f64) -> Result<GtMeasure> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must lie in [0, 1), got {delta}")));
    }
    build_table(params, n, cutoff, Some(1.0 - delta))
}

/// Every signature with `lambda_1 <= cutoff` (and `lambda_N >= -cutoff` in
/// two-sided mode), without early stopping.
pub fn measure_table_complete(params: &OmegaParams, n: usize, cutoff: i64) -> Result<GtMeasure> {
    build_table(params, n, cutoff, None)
}

fn build_table(params: &OmegaParams, n: usize, cutoff: i64, required: Option<f64>) -> Result<GtMeasure> {
    if n == 0 || cutoff < 0 {
        return Err(Error::InvalidParams(format!("bad table request N={n}, cutoff={cutoff}")));
    }
    let exact = params.is_plus_only();
    let lo = if exact { 0 } else { -cutoff };
    let max_size = cutoff * n as i64;
    let ps = if exact { Some(phi_scaled(params, (cutoff + n as i64) as usize)?) } else { None };
    let phi = if exact {
        vec![]
    } else {
        phi_coeffs(params, -(2 * cutoff + n as i64), 2 * cutoff + n as i64)?
    };
    let log_scale = ps.as_ref().map_or(0.0, |p| n as f64 * p.ln_c);
    let mut entries = Vec::new();
    let mut mass = 0.0;
    for size in 0..=max_size {
        let level: Vec<GtEntry> = signatures_of_size(n, lo, cutoff, size)
            .into_par_iter()
            .map(|parts| {
                let sig = Signature { parts };
                let dim = sig.dim();
                if let Some(ps) = &ps {
                    let m: Vec<Vec<Q>> = (0..n)
                        .map(|i| (0..n).map(|j| ps.scaled(sig.parts[i] - i as i64 + j as i64)).collect())
                        .collect();
                    let w = Q::from_integer(dim) * det_q(m);
                    if w.is_negative() {
                        return Err(Error::Inconsistent(format!("negative weight {w} at {sig}")));
                    }
                    let prob = if w.is_zero() { 0.0 } else { (log_scale + ln_q(&w)).exp() };
                    Ok(GtEntry { sig, prob, weight: Some(w) })
                } else {
                    let off = 2 * cutoff + n as i64;
                    let m: Vec<Vec<f64>> = (0..n)
                        .map(|i| {
                            (0..n).map(|j| phi[(sig.parts[i] - i as i64 + j as i64 + off) as usize]).collect()
                        })
                        .collect();
                    let prob = ln_bigint(&dim).exp() * det_f64(m);
                    if prob < -1e-12 {
                        return Err(Error::Precision(format!("negative probability {prob:e} at {sig}")));
                    }
                    Ok(GtEntry { sig, prob: prob.max(0.0), weight: None })
                }
            })
            .collect::<Result<_>>()?;
        mass += level.iter().map(|e| e.prob).sum::<f64>();
        entries.extend(level);
        if mass > 1.0 + MASS_TOL {
            return Err(Error::Inconsistent(format!("captured mass {mass} exceeds 1")));
        }
        if required.map_or(false, |r| mass >= r) {
            return Ok(GtMeasure { n, cutoff, entries, captured_mass: mass, log_scale });
        }
    }
    match required {
        Some(r) => Err(Error::IncreaseCutoff { captured: mass, required: r }),
        None => Ok(GtMeasure { n, cutoff, entries, captured_mass: mass, log_scale }),
    }
}

impl GtMeasure {
    /// `lambda,prob` CSV with parts joined by `|`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,prob\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.sig, fmt_num(e.prob)));
        }
        out
    }

    pub fn prob(&self, sig: &Signature) -> Option<f64> {
        self.entries.iter().find(|e| &e.sig == sig).map(|e| e.prob)
    }
}

/// Atoms of mass `1/N` at `(lambda_i - i + 1/2)/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    pub atoms: Vec<Q>,
    pub mass_each: Q,
}

impl AtomicMeasure {
    pub fn moment(&self, k: u32) -> Q {
        let mut s = Q::zero();
        for a in &self.atoms {
            s += num_traits::pow(a.clone(), k as usize);
        }
        s * &self.mass_each
    }
}

pub fn mu_lambda(sig: &Signature) -> AtomicMeasure {
    let n = sig.n() as i64;
    let atoms = sig
        .parts
        .iter()
        .enumerate()
        .map(|(i, &l)| Q::new(BigInt::from(2 * (l - i as i64 - 1) + 1), BigInt::from(2 * n)))
        .collect();
    AtomicMeasure { atoms, mass_each: Q::new(BigInt::one(), BigInt::from(n)) }
}

/// `2^k p_k = sum_i ((2(lambda_i - i) + 1)^k - (1 - 2i)^k)`, an integer.
pub fn p_k_scaled(sig: &Signature, k: u32) -> BigInt {
    let mut s = BigInt::zero();
    for (i0, &l) in sig.parts.iter().enumerate() {
        let i = i0 as i64 + 1;
        s += num_traits::pow(BigInt::from(2 * (l - i) + 1), k as usize);
        s -= num_traits::pow(BigInt::from(1 - 2 * i), k as usize);
    }
    s
}

/// `p_k^{(N)}(lambda) = sum_i ((lambda_i - i + 1/2)^k - (-i + 1/2)^k)`.
pub fn p_k_eval(sig: &Signature, k: u32) -> Result<Q> {
    if k == 0 {
        return Err(Error::InvalidParams("p_k needs k >= 1".into()));
    }
    Ok(Q::new(p_k_scaled(sig, k), num_traits::pow(BigInt::from(2), k as usize)))
}

/// Integer breakpoints `(x, w(x))` of the piecewise-linear profile, from
/// `lambda_N - N - 1` to `lambda_1 + 1`; `w` is linear between them.
pub fn w_lambda(sig: &Signature) -> Vec<(i64, i64)> {
    let n = sig.n() as i64;
    let lo = sig.parts[sig.n() - 1] - n - 1;
    let hi = sig.parts[0] + 1;
    // slope -1 on [lambda_i - i, lambda_i - i + 1]
    let left_ends: Vec<i64> = sig.parts.iter().enumerate().map(|(i, &l)| l - i as i64 - 1).collect();
    (lo..=hi).map(|x| (x, x + 2 * left_ends.iter().filter(|&&a| a >= x).count() as i64)).collect()
}

/// Per `k`: `(E[p_k]/N^{k+1}, E[p_k^2]/N^{2(k+1)})` over the table,
/// renormalized by the captured mass. Exact tables are averaged exactly.
pub fn empirical_moments(m: &GtMeasure, k_max: u32) -> Vec<(f64, f64)> {
    let n = m.n as f64;
    (1..=k_max)
        .map(|k| {
            let (e1, e2) = if m.entries.iter().all(|e| e.weight.is_some()) {
                let mut tw = Q::zero();
                let mut s1 = Q::zero();
                let mut s2 = Q::zero();
                for e in &m.entries {
                    let w = e.weight.as_ref().unwrap();
                    let p = p_k_eval(&e.sig, k).expect("k >= 1");
                    tw += w;
                    s1 += w * &p;
                    s2 += w * &p * &p;
                }
                (q_to_f64(&(s1 / &tw)), q_to_f64(&(s2 / &tw)))
            } else {
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                for e in &m.entries {
                    let p = q_to_f64(&p_k_eval(&e.sig, k).expect("k >= 1"));
                    s1 += e.prob * p;
                    s2 += e.prob * p * p;
                }
                (s1 / m.captured_mass, s2 / m.captured_mass)
            };
            (e1 / n.powi(k as i32 + 1), e2 / n.powi(2 * (k as i32 + 1)))
        })
        .collect()
}
