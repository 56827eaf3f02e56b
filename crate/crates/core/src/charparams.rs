//! Voiculescu parameters for one character and for scaling sequences.
//!
//! [`OmegaParams`] holds the finite-N data (alpha, beta, gamma on both
//! sides). [`LimitParams`] holds the scaling limit: `g_plus`, `g_minus` and
//! four finite atomic measures. From the latter we get the exact Taylor
//! prefix of `P'(z)` and closed-form complex evaluation of `P` and `P'`.

use crate::error::{Error, Result};
use crate::fps::{q_to_f64, qi, Series, Q};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Distance below which an evaluation point counts as hitting a singularity.
pub const SINGULAR_TOL: f64 = 1e-12;

/// One Voiculescu parameter value with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub value: Q,
    pub mult: u64,
}

impl Param {
    pub fn new(value: Q, mult: u64) -> Self {
        Param { value, mult }
    }
}

/// Finite-N parameter data of an extreme character.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OmegaParams {
    alpha_plus: Vec<Param>,
    alpha_minus: Vec<Param>,
    beta_plus: Vec<Param>,
    beta_minus: Vec<Param>,
    gamma_plus: Q,
    gamma_minus: Q,
}

fn check_params(name: &str, ps: &[Param], upper: Option<&Q>) -> Result<()> {
    for p in ps {
        if p.value.is_negative() {
            return Err(Error::InvalidParams(format!("{name} value {} is negative", p.value)));
        }
        if let Some(u) = upper {
            if &p.value > u {
                return Err(Error::InvalidParams(format!("{name} value {} exceeds 1", p.value)));
            }
        }
        if p.mult == 0 {
            return Err(Error::InvalidParams(format!("{name} multiplicity must be positive")));
        }
    }
    Ok(())
}

fn max_value(ps: &[Param]) -> Q {
    ps.iter().map(|p| p.value.clone()).max().unwrap_or_else(Q::zero)
}

impl OmegaParams {
    pub fn new(
        alpha_plus: Vec<Param>,
        alpha_minus: Vec<Param>,
        beta_plus: Vec<Param>,
        beta_minus: Vec<Param>,
        gamma_plus: Q,
        gamma_minus: Q,
    ) -> Result<Self> {
        let one = qi(1);
        check_params("alpha_plus", &alpha_plus, None)?;
        check_params("alpha_minus", &alpha_minus, None)?;
        check_params("beta_plus", &beta_plus, Some(&one))?;
        check_params("beta_minus", &beta_minus, Some(&one))?;
        if gamma_plus.is_negative() || gamma_minus.is_negative() {
            return Err(Error::InvalidParams("gamma values must be nonnegative".into()));
        }
        if max_value(&beta_plus) + max_value(&beta_minus) > one {
            return Err(Error::InvalidParams("max beta_plus + max beta_minus exceeds 1".into()));
        }
        Ok(OmegaParams { alpha_plus, alpha_minus, beta_plus, beta_minus, gamma_plus, gamma_minus })
    }

    pub fn trivial() -> Self {
        OmegaParams::default()
    }

    pub fn gamma_only(gamma_plus: Q) -> Result<Self> {
        OmegaParams::new(vec![], vec![], vec![], vec![], gamma_plus, Q::zero())
    }

    pub fn alpha_plus(&self) -> &[Param] {
        &self.alpha_plus
    }
    pub fn alpha_minus(&self) -> &[Param] {
        &self.alpha_minus
    }
    pub fn beta_plus(&self) -> &[Param] {
        &self.beta_plus
    }
    pub fn beta_minus(&self) -> &[Param] {
        &self.beta_minus
    }
    pub fn gamma_plus(&self) -> &Q {
        &self.gamma_plus
    }
    pub fn gamma_minus(&self) -> &Q {
        &self.gamma_minus
    }

    /// True when every minus-side parameter vanishes.
    pub fn is_plus_only(&self) -> bool {
        self.gamma_minus.is_zero()
            && self.alpha_minus.iter().all(|p| p.value.is_zero())
            && self.beta_minus.iter().all(|p| p.value.is_zero())
    }

    /// `delta_plus = gamma_plus + sum(alpha_plus + beta_plus)`, with multiplicity.
    pub fn delta_plus(&self) -> Q {
        let s: Q = self
            .alpha_plus
            .iter()
            .chain(&self.beta_plus)
            .map(|p| &p.value * qi(p.mult as i64))
            .sum();
        s + &self.gamma_plus
    }

    /// `delta_minus`, the mirror of [`OmegaParams::delta_plus`].
    pub fn delta_minus(&self) -> Q {
        let s: Q = self
            .alpha_minus
            .iter()
            .chain(&self.beta_minus)
            .map(|p| &p.value * qi(p.mult as i64))
            .sum();
        s + &self.gamma_minus
    }
}

/// An atom of a limiting measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub x: Q,
    pub w: Q,
}

impl Atom {
    pub fn new(x: Q, w: Q) -> Self {
        Atom { x, w }
    }
}

/// Closed-form `P'` overriding the atomic formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// Uniform limit of `alpha_plus = i/N`, `i <= N`:
    /// `P'(z) = (-z - log(1-z))/z^2`.
    Continuous,
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Continuous => "continuous",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(ClosedForm::Continuous),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

/// Scaling-limit data: `g_plus`, `g_minus` and four finite atomic measures.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LimitParams {
    g_plus: Q,
    g_minus: Q,
    a_plus: Vec<Atom>,
    a_minus: Vec<Atom>,
    b_plus: Vec<Atom>,
    b_minus: Vec<Atom>,
    closed_form: Option<ClosedForm>,
}

fn check_atoms(name: &str, atoms: &[Atom], unit: bool) -> Result<()> {
    for a in atoms {
        if a.x.is_negative() {
            return Err(Error::InvalidParams(format!("{name} atom location {} is negative", a.x)));
        }
        if unit && a.x > qi(1) {
            return Err(Error::InvalidParams(format!("{name} atom location {} exceeds 1", a.x)));
        }
        if !a.w.is_positive() {
            return Err(Error::InvalidParams(format!("{name} atom weight {} must be positive", a.w)));
        }
    }
    Ok(())
}

impl LimitParams {
    pub fn new(
        g_plus: Q,
        g_minus: Q,
        a_plus: Vec<Atom>,
        a_minus: Vec<Atom>,
        b_plus: Vec<Atom>,
        b_minus: Vec<Atom>,
    ) -> Result<Self> {
        if g_plus.is_negative() || g_minus.is_negative() {
            return Err(Error::InvalidParams("g_plus and g_minus must be nonnegative".into()));
        }
        check_atoms("A_plus", &a_plus, false)?;
        check_atoms("A_minus", &a_minus, false)?;
        check_atoms("B_plus", &b_plus, true)?;
        check_atoms("B_minus", &b_minus, true)?;
        Ok(LimitParams { g_plus, g_minus, a_plus, a_minus, b_plus, b_minus, closed_form: None })
    }

    /// The trivial character: `P = 0`.
    pub fn trivial() -> Self {
        LimitParams::default()
    }

    pub fn plancherel(g: Q) -> Result<Self> {
        LimitParams::new(g, Q::zero(), vec![], vec![], vec![], vec![])
    }

    pub fn from_closed_form(cf: ClosedForm) -> Self {
        LimitParams { closed_form: Some(cf), ..LimitParams::default() }
    }

    pub fn g_plus(&self) -> &Q {
        &self.g_plus
    }
    pub fn g_minus(&self) -> &Q {
        &self.g_minus
    }
    pub fn a_plus(&self) -> &[Atom] {
        &self.a_plus
    }
    pub fn a_minus(&self) -> &[Atom] {
        &self.a_minus
    }
    pub fn b_plus(&self) -> &[Atom] {
        &self.b_plus
    }
    pub fn b_minus(&self) -> &[Atom] {
        &self.b_minus
    }
    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// True when `P'` is a rational function (no closed-form override).
    pub fn is_rational(&self) -> bool {
        self.closed_form.is_none()
    }

    /// Parameters whose `P'` is the sum of both inputs' `P'`.
    pub fn combine(&self, o: &LimitParams) -> Result<LimitParams> {
        if self.closed_form.is_some() || o.closed_form.is_some() {
            return Err(Error::InvalidParams("closed-form presets cannot be combined".into()));
        }
        let cat = |a: &[Atom], b: &[Atom]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        LimitParams::new(
            &self.g_plus + &o.g_plus,
            &self.g_minus + &o.g_minus,
            cat(&self.a_plus, &o.a_plus),
            cat(&self.a_minus, &o.a_minus),
            cat(&self.b_plus, &o.b_plus),
            cat(&self.b_minus, &o.b_minus),
        )
    }

    /// Positive lower bound on the convergence radius of `P'` at 0.
    ///
    /// The nearest pole or branch point; 1 when there is none.
    pub fn radius_hint(&self) -> Q {
        let one = qi(1);
        let mut r: Option<Q> = None;
        let mut upd = |v: Q| {
            if r.as_ref().map_or(true, |cur| v < *cur) {
                r = Some(v);
            }
        };
        if self.closed_form.is_some() || self.g_minus.is_positive() {
            upd(one.clone());
        }
        for a in &self.a_plus {
            if a.x.is_positive() {
                upd(one.clone() / &a.x);
            }
        }
        for b in &self.b_plus {
            if b.x.is_positive() {
                upd(one.clone() / &b.x);
            }
        }
        if !self.b_minus.is_empty() {
            upd(one.clone());
        }
        for a in &self.a_minus {
            upd(one.clone() / (&one + &a.x));
        }
        r.unwrap_or(one)
    }
}

/// Taylor data of `P'(z) = t_1 + t_2 z + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    series: Series,
    radius_hint: Q,
}

impl TSeries {
    pub fn new(series: Series, radius_hint: Q) -> Result<Self> {
        if !radius_hint.is_positive() {
            return Err(Error::InvalidParams("radius_hint must be positive".into()));
        }
        Ok(TSeries { series, radius_hint })
    }

    /// From `t_1..t_K` with the conservative radius hint 1.
    pub fn from_t(t: Vec<Q>) -> Self {
        TSeries { series: Series::new(t), radius_hint: qi(1) }
    }

    /// Zero `P'` with `K` known coefficients.
    pub fn zero(k: usize) -> Self {
        TSeries::from_t(vec![Q::zero(); k.max(1)])
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn radius_hint(&self) -> &Q {
        &self.radius_hint
    }

    /// Number of known coefficients `K`.
    pub fn len(&self) -> usize {
        self.series.order() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t_k` for `1 <= k <= K`.
    pub fn t(&self, k: usize) -> &Q {
        self.series.coeff(k - 1)
    }

    pub fn ts(&self) -> &[Q] {
        self.series.coeffs()
    }

    /// Keeps `t_1..t_k`.
    pub fn truncate(&self, k: usize) -> Result<TSeries> {
        if k == 0 {
            return Err(Error::OrderOutOfRange { requested: 0, available: self.len() });
        }
        Ok(TSeries { series: self.series.truncate(k - 1)?, radius_hint: self.radius_hint.clone() })
    }

    /// Coefficientwise sum; the radius hint is the smaller one.
    pub fn add(&self, o: &TSeries) -> TSeries {
        TSeries {
            series: self.series.add(&o.series),
            radius_hint: self.radius_hint.clone().min(o.radius_hint.clone()),
        }
    }
}

/// Exact Taylor series of `log Phi(z+1)` to order `order`.
pub fn log_phi_series(params: &OmegaParams, order: usize) -> Result<Series> {
    let z = Series::<Q>::var(order);
    let mut acc = z.scale(&params.gamma_plus);
    if !params.gamma_minus.is_zero() {
        // 1/(1+z) - 1
        let g = Series::geometric(&qi(-1), order).sub(&Series::one(order));
        acc = acc.add(&g.scale(&params.gamma_minus));
    }
    let z_over_1pz = z.mul(&Series::geometric(&qi(-1), order));
    for p in &params.alpha_plus {
        let t = z.scale(&-&p.value).log1p()?;
        acc = acc.sub(&t.scale(&qi(p.mult as i64)));
    }
    for p in &params.beta_plus {
        let t = z.scale(&p.value).log1p()?;
        acc = acc.add(&t.scale(&qi(p.mult as i64)));
    }
    for p in &params.beta_minus {
        let t = z_over_1pz.scale(&-&p.value).log1p()?;
        acc = acc.add(&t.scale(&qi(p.mult as i64)));
    }
    for p in &params.alpha_minus {
        let t = z_over_1pz.scale(&p.value).log1p()?;
        acc = acc.sub(&t.scale(&qi(p.mult as i64)));
    }
    Ok(acc)
}

/// Exact `t_1..t_K` of `P'` (series order `K - 1`).
pub fn p_prime_series(lim: &LimitParams, k: usize) -> Result<TSeries> {
    if k == 0 {
        return Err(Error::OrderOutOfRange { requested: 0, available: 0 });
    }
    let ord = k - 1;
    let series = match lim.closed_form {
        Some(ClosedForm::Continuous) => Series::from_fn(ord, |i| Q::new(1.into(), (i as i64 + 2).into())),
        None => {
            let mut acc = Series::constant(lim.g_plus.clone(), ord);
            let inv1pz = Series::geometric(&qi(-1), ord);
            if !lim.g_minus.is_zero() {
                acc = acc.sub(&inv1pz.mul(&inv1pz).scale(&lim.g_minus));
            }
            for a in &lim.a_plus {
                acc = acc.add(&Series::geometric(&a.x, ord).scale(&(&a.w * &a.x)));
            }
            for b in &lim.b_plus {
                acc = acc.add(&Series::geometric(&-&b.x, ord).scale(&(&b.w * &b.x)));
            }
            for b in &lim.b_minus {
                let c = qi(1) - &b.x;
                let g = inv1pz.mul(&Series::geometric(&-c, ord));
                acc = acc.sub(&g.scale(&(&b.w * &b.x)));
            }
            for a in &lim.a_minus {
                let c = qi(1) + &a.x;
                let g = inv1pz.mul(&Series::geometric(&-c, ord));
                acc = acc.sub(&g.scale(&(&a.w * &a.x)));
            }
            acc
        }
    };
    TSeries::new(series, lim.radius_hint())
}

/// Double-precision copy of the parameters for pointwise evaluation.
#[derive(Clone, Debug)]
pub(crate) struct NumParams {
    g_plus: f64,
    g_minus: f64,
    a_plus: Vec<(f64, f64)>,
    a_minus: Vec<(f64, f64)>,
    b_plus: Vec<(f64, f64)>,
    b_minus: Vec<(f64, f64)>,
    closed_form: Option<ClosedForm>,
}

impl NumParams {
    pub(crate) fn new(lim: &LimitParams) -> Self {
        let conv = |v: &[Atom]| v.iter().map(|a| (q_to_f64(&a.x), q_to_f64(&a.w))).collect();
        NumParams {
            g_plus: q_to_f64(&lim.g_plus),
            g_minus: q_to_f64(&lim.g_minus),
            a_plus: conv(&lim.a_plus),
            a_minus: conv(&lim.a_minus),
            b_plus: conv(&lim.b_plus),
            b_minus: conv(&lim.b_minus),
            closed_form: lim.closed_form,
        }
    }

    fn singular(z: Complex64, pole: f64) -> Result<()> {
        if (z - pole).norm() < SINGULAR_TOL {
            Err(Error::SingularPoint(format!("z = {z} is within {SINGULAR_TOL} of {pole}")))
        } else {
            Ok(())
        }
    }

    fn check(&self, z: Complex64) -> Result<()> {
        if let Some(ClosedForm::Continuous) = self.closed_form {
            return NumParams::singular(z, 1.0);
        }
        let minus_side =
            self.g_minus != 0.0 || !self.b_minus.is_empty() || !self.a_minus.is_empty();
        if minus_side {
            NumParams::singular(z, -1.0)?;
        }
        for &(x, _) in &self.a_plus {
            if x > 0.0 {
                NumParams::singular(z, 1.0 / x)?;
            }
        }
        for &(y, _) in &self.b_plus {
            if y > 0.0 {
                NumParams::singular(z, -1.0 / y)?;
            }
        }
        for &(y, _) in &self.b_minus {
            if y < 1.0 {
                NumParams::singular(z, -1.0 / (1.0 - y))?;
            }
        }
        for &(x, _) in &self.a_minus {
            NumParams::singular(z, -1.0 / (1.0 + x))?;
        }
        Ok(())
    }

    pub(crate) fn p_prime(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self.p_prime_unchecked(z))
    }

    pub(crate) fn p_prime_unchecked(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        if let Some(ClosedForm::Continuous) = self.closed_form {
            return continuous_p1(z);
        }
        let mut v = Complex64::new(self.g_plus, 0.0);
        if self.g_minus != 0.0 {
            v -= self.g_minus / ((one + z) * (one + z));
        }
        for &(x, w) in &self.a_plus {
            v += w * x / (one - x * z);
        }
        for &(y, w) in &self.b_plus {
            v += w * y / (one + y * z);
        }
        for &(y, w) in &self.b_minus {
            v -= w * y / ((one + z) * (one + (1.0 - y) * z));
        }
        for &(x, w) in &self.a_minus {
            v -= w * x / ((one + z) * (one + (1.0 + x) * z));
        }
        v
    }

    pub(crate) fn p_second(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        if let Some(ClosedForm::Continuous) = self.closed_form {
            return continuous_p2(z);
        }
        let mut v = Complex64::new(0.0, 0.0);
        if self.g_minus != 0.0 {
            let u = one + z;
            v += 2.0 * self.g_minus / (u * u * u);
        }
        for &(x, w) in &self.a_plus {
            let d = one - x * z;
            v += w * x * x / (d * d);
        }
        for &(y, w) in &self.b_plus {
            let d = one + y * z;
            v -= w * y * y / (d * d);
        }
        let pair = |c: f64| {
            let u = one + z;
            let d = one + c * z;
            (d + c * u) / (u * u * d * d)
        };
        for &(y, w) in &self.b_minus {
            v += w * y * pair(1.0 - y);
        }
        for &(x, w) in &self.a_minus {
            v += w * x * pair(1.0 + x);
        }
        v
    }

    pub(crate) fn p(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self.p_unchecked(z))
    }

    pub(crate) fn p_unchecked(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        if let Some(ClosedForm::Continuous) = self.closed_form {
            return continuous_p0(z);
        }
        let mut v = self.g_plus * z;
        if self.g_minus != 0.0 {
            v += self.g_minus * (one / (one + z) - one);
        }
        for &(x, w) in &self.a_plus {
            v -= w * (one - x * z).ln();
        }
        for &(y, w) in &self.b_plus {
            v += w * (one + y * z).ln();
        }
        for &(y, w) in &self.b_minus {
            v += w * (one - y * z / (one + z)).ln();
        }
        for &(x, w) in &self.a_minus {
            v -= w * (one + x * z / (one + z)).ln();
        }
        v
    }
}

const SMALL: f64 = 0.05;

/// `(-z - log(1-z))/z^2 = sum z^{k-1}/(k+1)`.
fn continuous_p1(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=30).rev() {
            acc = acc * z + 1.0 / (k as f64 + 1.0);
        }
        return acc;
    }
    let one = Complex64::new(1.0, 0.0);
    (-z - (one - z).ln()) / (z * z)
}

/// Derivative of [`continuous_p1`]: `1/(z(1-z)) + 2(z + log(1-z))/z^3`.
fn continuous_p2(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (2..=31).rev() {
            acc = acc * z + (k as f64 - 1.0) / (k as f64 + 1.0);
        }
        return acc;
    }
    let one = Complex64::new(1.0, 0.0);
    one / (z * (one - z)) + 2.0 * (z + (one - z).ln()) / (z * z * z)
}

/// `P(z) = 1 + (1-z) log(1-z)/z = sum z^k/(k(k+1))`.
fn continuous_p0(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=30).rev() {
            acc = acc * z + 1.0 / (k as f64 * (k as f64 + 1.0));
        }
        return acc * z;
    }
    let one = Complex64::new(1.0, 0.0);
    one + (one - z) * (one - z).ln() / z
}

/// `P'(z)` in closed form.
pub fn p_prime_eval(lim: &LimitParams, z: Complex64) -> Result<Complex64> {
    NumParams::new(lim).p_prime(z)
}

/// `P(z)` in closed form with principal-branch logarithms; `P(0) = 0`.
pub fn p_eval(lim: &LimitParams, z: Complex64) -> Result<Complex64> {
    NumParams::new(lim).p(z)
}

/// `omega(N)`: `gamma = g N`, each atom `(x, w)` becomes `floor(w N)` copies of `x`.
///
/// The continuous preset becomes `alpha_plus = i/N` for `i = 1..N`.
pub fn scaling_sequence(lim: &LimitParams, n: u64) -> Result<OmegaParams> {
    if n == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    let nq = qi(n as i64);
    if let Some(ClosedForm::Continuous) = lim.closed_form {
        let alphas = (1..=n).map(|i| Param::new(Q::new(i.into(), n.into()), 1)).collect();
        return OmegaParams::new(alphas, vec![], vec![], vec![], Q::zero(), Q::zero());
    }
    let conv = |atoms: &[Atom]| -> Vec<Param> {
        atoms
            .iter()
            .filter_map(|a| {
                let m = (&a.w * &nq).floor().to_integer().to_u64().unwrap_or(0);
                (m > 0).then(|| Param::new(a.x.clone(), m))
            })
            .collect()
    };
    OmegaParams::new(
        conv(&lim.a_plus),
        conv(&lim.a_minus),
        conv(&lim.b_plus),
        conv(&lim.b_minus),
        &lim.g_plus * &nq,
        &lim.g_minus * &nq,
    )
}

/// `max_{k <= K} |t_k - k [z^k] (1/N) log Phi(z+1)|` for `omega(N)`.
pub fn convergence_gap(lim: &LimitParams, n: u64, k: usize) -> Result<Q> {
    let t = p_prime_series(lim, k)?;
    let omega = scaling_sequence(lim, n)?;
    let lp = log_phi_series(&omega, k)?;
    let nq = qi(n as i64);
    let mut gap = Q::zero();
    for j in 1..=k {
        let approx = lp.coeff(j) * qi(j as i64) / &nq;
        let d = (t.t(j) - approx).abs();
        if d > gap {
            gap = d;
        }
    }
    Ok(gap)
}

impl fmt::Display for LimitParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(cf) = self.closed_form {
            return write!(f, "preset {}", cf.name());
        }
        write!(f, "g+={} g-={}", self.g_plus, self.g_minus)?;
        for (name, atoms) in [
            ("A+", &self.a_plus),
            ("A-", &self.a_minus),
            ("B+", &self.b_plus),
            ("B-", &self.b_minus),
        ] {
            for a in atoms.iter() {
                write!(f, " {name}({},{})", a.x, a.w)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::qf;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_phi_examples() {
        let g = qf(2, 3);
        let p = OmegaParams::gamma_only(g.clone()).unwrap();
        let s = log_phi_series(&p, 5).unwrap();
        assert_eq!(s, Series::var(5).scale(&g));

        let a = qf(1, 3);
        let p = OmegaParams::new(vec![Param::new(a.clone(), 1)], vec![], vec![], vec![], qi(0), qi(0)).unwrap();
        let s = log_phi_series(&p, 4).unwrap();
        for k in 1..=4 {
            let expect = num_traits::pow(a.clone(), k) / qi(k as i64);
            assert_eq!(*s.coeff(k), expect);
        }

        let b = qf(2, 5);
        let p = OmegaParams::new(vec![], vec![], vec![], vec![Param::new(b.clone(), 1)], qi(0), qi(0)).unwrap();
        let s = log_phi_series(&p, 2).unwrap();
        assert_eq!(*s.coeff(0), qi(0));
        assert_eq!(*s.coeff(1), -b.clone());
        assert_eq!(*s.coeff(2), &b - &b * &b / qi(2));
    }

    #[test]
    fn omega_constraints() {
        let half = qf(1, 2);
        let bad = OmegaParams::new(
            vec![],
            vec![],
            vec![Param::new(qf(3, 4), 1)],
            vec![Param::new(half.clone(), 1)],
            qi(0),
            qi(0),
        );
        assert!(bad.is_err());
        assert!(OmegaParams::new(vec![], vec![], vec![Param::new(qi(2), 1)], vec![], qi(0), qi(0)).is_err());
        let ok = OmegaParams::new(
            vec![Param::new(qi(3), 2)],
            vec![],
            vec![Param::new(half.clone(), 1)],
            vec![Param::new(half, 1)],
            qi(1),
            qi(0),
        )
        .unwrap();
        assert_eq!(ok.delta_plus(), qi(1) + qi(6) + qf(1, 2));
        assert_eq!(ok.delta_minus(), qf(1, 2));
    }

    #[test]
    fn p_prime_series_examples() {
        let g = qf(5, 4);
        let t = p_prime_series(&LimitParams::plancherel(g.clone()).unwrap(), 6).unwrap();
        assert_eq!(t.t(1), &g);
        assert!(t.ts()[1..].iter().all(|c| c.is_zero()));

        let t = p_prime_series(&LimitParams::from_closed_form(ClosedForm::Continuous), 3).unwrap();
        assert_eq!(t.ts(), &[qf(1, 2), qf(1, 3), qf(1, 4)]);

        // a alpha/(1 - alpha z) - a~ alpha~/((1+z)(1+(alpha~+1) z))
        let (al, a, alt, at) = (qf(1, 2), qf(3, 2), qf(1, 3), qf(2, 7));
        let lim = LimitParams::new(
            qi(0),
            qi(0),
            vec![Atom::new(al.clone(), a.clone())],
            vec![Atom::new(alt.clone(), at.clone())],
            vec![],
            vec![],
        )
        .unwrap();
        let t = p_prime_series(&lim, 6).unwrap();
        let num = Series::constant(&a * &al, 5);
        let first = num.div(&Series::new(vec![qi(1), -al.clone(), qi(0), qi(0), qi(0), qi(0)])).unwrap();
        let den2 = Series::new(vec![qi(1), qi(1), qi(0), qi(0), qi(0), qi(0)])
            .mul(&Series::new(vec![qi(1), &alt + qi(1), qi(0), qi(0), qi(0), qi(0)]));
        let second = Series::constant(&at * &alt, 5).div(&den2).unwrap();
        assert_eq!(t.series(), &first.sub(&second));
        assert_eq!(t.radius_hint(), &Q::new(3.into(), 4.into()));
    }

    #[test]
    fn p_prime_eval_examples() {
        let g = LimitParams::plancherel(qi(2)).unwrap();
        assert_eq!(p_prime_eval(&g, c(3.0, -7.0)).unwrap(), c(2.0, 0.0));
        let lim = LimitParams::new(qi(0), qi(0), vec![Atom::new(qi(1), qi(1))], vec![], vec![], vec![]).unwrap();
        let v = p_prime_eval(&lim, c(0.0, 2.0)).unwrap();
        assert!((v - c(0.2, 0.4)).norm() < 1e-15);
        assert!(matches!(p_prime_eval(&lim, c(1.0, 0.0)), Err(Error::SingularPoint(_))));
        assert_eq!(p_eval(&lim, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let cont = LimitParams::from_closed_form(ClosedForm::Continuous);
        assert!(p_eval(&cont, c(0.0, 0.0)).unwrap().norm() < 1e-300);
        assert!(p_eval(&cont, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn continuous_branches_agree_across_switch() {
        for z in [c(0.049, 0.0), c(0.0, 0.0499), c(-0.03, 0.035)] {
            let z2 = z * (SMALL + 1e-9) / z.norm();
            let z1 = z * (SMALL - 1e-9) / z.norm();
            assert!((continuous_p1(z1) - continuous_p1(z2)).norm() < 1e-8);
            assert!((continuous_p2(z1) - continuous_p2(z2)).norm() < 1e-6);
            assert!((continuous_p0(z1) - continuous_p0(z2)).norm() < 1e-8);
        }
    }

    #[test]
    fn scaling_sequence_examples() {
        let o = scaling_sequence(&LimitParams::plancherel(qi(1)).unwrap(), 5).unwrap();
        assert_eq!(o.gamma_plus(), &qi(5));
        assert!(o.alpha_plus().is_empty() && o.beta_plus().is_empty());

        let lim = LimitParams::new(qi(0), qi(0), vec![Atom::new(qi(1), qi(1))], vec![], vec![], vec![]).unwrap();
        let o = scaling_sequence(&lim, 4).unwrap();
        assert_eq!(o.alpha_plus(), &[Param::new(qi(1), 4)]);

        let lim = LimitParams::new(qi(0), qi(0), vec![], vec![], vec![Atom::new(qf(1, 2), qf(1, 2))], vec![]).unwrap();
        let o = scaling_sequence(&lim, 10).unwrap();
        assert_eq!(o.beta_plus(), &[Param::new(qf(1, 2), 5)]);

        assert!(LimitParams::new(qi(0), qi(0), vec![], vec![], vec![Atom::new(qf(3, 2), qi(1))], vec![]).is_err());
    }

    #[test]
    fn convergence_gap_examples() {
        let pl = LimitParams::plancherel(qf(7, 3)).unwrap();
        assert_eq!(convergence_gap(&pl, 9, 6).unwrap(), qi(0));
        let b = LimitParams::new(qi(0), qi(0), vec![], vec![], vec![Atom::new(qf(1, 2), qf(1, 2))], vec![]).unwrap();
        assert!(convergence_gap(&b, 100, 6).unwrap() <= convergence_gap(&b, 10, 6).unwrap());
        let a = LimitParams::new(qi(0), qi(0), vec![Atom::new(qi(1), qi(1))], vec![], vec![], vec![]).unwrap();
        assert_eq!(convergence_gap(&a, 7, 6).unwrap(), qi(0));
        let third = LimitParams::new(qi(0), qi(0), vec![Atom::new(qf(1, 2), qf(1, 3))], vec![], vec![], vec![]).unwrap();
        let g10 = convergence_gap(&third, 10, 5).unwrap();
        let g40 = convergence_gap(&third, 40, 5).unwrap();
        assert!(g10.is_positive() && g40 < g10);
    }

    #[test]
    fn continuous_scaling_converges() {
        let lim = LimitParams::from_closed_form(ClosedForm::Continuous);
        let g5 = convergence_gap(&lim, 5, 4).unwrap();
        let g20 = convergence_gap(&lim, 20, 4).unwrap();
        assert!(g20 < g5);
    }
}
