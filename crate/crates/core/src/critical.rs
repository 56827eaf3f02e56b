//! The critical-point equation `P'(w-1) - (z+y)/w + y/(w-1) = 0` and the
//! continuation that singles out its physical root.
//!
//! For large `|z|` the physical root is `w ~ 1 + y/z`. It is followed along
//! the vertical path `z0 + i d s` with `s` shrinking geometrically to 0, so
//! every evaluation point is reached independently of its neighbours. With
//! `z0` real and `d = -1` the limit lies in the closed upper half-plane and
//! `arg(w)/pi` is the limit density; with `d = +1` the root at `z0` in the
//! upper half-plane gives the Stieltjes transform `log w`.

use crate::charparams::{LimitParams, NumParams};
use crate::error::{Error, Result};
use crate::fps::{q_to_f64, qi, Q};
use crate::roots::aberth;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

const MAX_HALVINGS: u32 = 40;
const H_INIT: f64 = 0.35;
const H_MAX: f64 = 0.7;
/// Relative imaginary part below which a final root counts as real.
pub const REAL_TOL: f64 = 1e-11;

type QPoly = Vec<Q>;

fn qpoly_mul_linear(p: &QPoly, r: &Q) -> QPoly {
    // p(w) * (w - r)
    let mut out = vec![Q::zero(); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i + 1] += a;
        out[i] -= a * r;
    }
    out
}

fn qpoly_add_into(acc: &mut QPoly, p: &QPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Q::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

/// `c / prod (w - r)^m`.
struct Term {
    c: Q,
    den: Vec<(Q, u32)>,
}

/// `P'(w - 1)` as a sum of partial fractions in `w`.
fn p_prime_terms(lim: &LimitParams) -> Vec<Term> {
    let one = qi(1);
    let mut v = Vec::new();
    if !lim.g_plus().is_zero() {
        v.push(Term { c: lim.g_plus().clone(), den: vec![] });
    }
    if !lim.g_minus().is_zero() {
        v.push(Term { c: -lim.g_minus().clone(), den: vec![(Q::zero(), 2)] });
    }
    for a in lim.a_plus().iter().filter(|a| a.x.is_positive()) {
        v.push(Term { c: -a.w.clone(), den: vec![((&one + &a.x) / &a.x, 1)] });
    }
    for b in lim.b_plus().iter().filter(|b| b.x.is_positive()) {
        v.push(Term { c: b.w.clone(), den: vec![((&b.x - &one) / &b.x, 1)] });
    }
    for b in lim.b_minus().iter().filter(|b| b.x.is_positive()) {
        if b.x == one {
            v.push(Term { c: -b.w.clone(), den: vec![(Q::zero(), 1)] });
        } else {
            let c = &one - &b.x;
            v.push(Term {
                c: -(&b.w * &b.x) / &c,
                den: vec![(Q::zero(), 1), (-(&b.x / &c), 1)],
            });
        }
    }
    for a in lim.a_minus().iter().filter(|a| a.x.is_positive()) {
        let c = &one + &a.x;
        v.push(Term { c: -(&a.w * &a.x) / &c, den: vec![(Q::zero(), 1), (&a.x / &c, 1)] });
    }
    v
}

/// Numerator of `c/den` over the common denominator `lcd`.
fn over_lcd(c: &Q, den: &[(Q, u32)], lcd: &BTreeMap<Q, u32>) -> QPoly {
    let mut p = vec![c.clone()];
    for (r, &m) in lcd {
        let used = den.iter().filter(|(s, _)| s == r).map(|(_, k)| *k).sum::<u32>();
        for _ in used..m {
            p = qpoly_mul_linear(&p, r);
        }
    }
    p
}

/// Exact cleared numerator `A0(w) + y Ay(w) + z B(w)`.
#[derive(Clone, Debug)]
pub struct ClearedPoly {
    pub a0: Vec<Q>,
    pub ay: Vec<Q>,
    pub b: Vec<Q>,
    /// Distinct poles of the equation with their multiplicities.
    pub poles: Vec<(Q, u32)>,
}

impl ClearedPoly {
    /// `None` for a closed-form (non-rational) `P'`.
    pub fn new(lim: &LimitParams) -> Option<ClearedPoly> {
        if !lim.is_rational() {
            return None;
        }
        let terms = p_prime_terms(lim);
        let mut lcd: BTreeMap<Q, u32> = BTreeMap::new();
        lcd.insert(Q::zero(), 1);
        lcd.insert(qi(1), 1);
        for t in &terms {
            for (r, m) in &t.den {
                let e = lcd.entry(r.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut a0 = vec![Q::zero()];
        for t in &terms {
            qpoly_add_into(&mut a0, &over_lcd(&t.c, &t.den, &lcd));
        }
        let mut ay = over_lcd(&Q::one(), &[(qi(1), 1)], &lcd);
        qpoly_add_into(&mut ay, &over_lcd(&-Q::one(), &[(Q::zero(), 1)], &lcd));
        let b = over_lcd(&-Q::one(), &[(Q::zero(), 1)], &lcd);
        Some(ClearedPoly { a0, ay, b, poles: lcd.into_iter().collect() })
    }

    pub fn degree_bound(&self) -> usize {
        self.a0.len().max(self.ay.len()).max(self.b.len()) - 1
    }
}

/// Continuation solver for one set of limit parameters.
#[derive(Clone, Debug)]
pub struct CriticalSolver {
    num: NumParams,
    a0: Vec<f64>,
    ay: Vec<f64>,
    b: Vec<f64>,
    rational: bool,
    scale: f64,
}

enum StepOutcome {
    /// New physical root, with the full root set on the polynomial path.
    Accepted(Complex64, Vec<Complex64>),
    Rejected,
}

impl CriticalSolver {
    pub fn new(lim: &LimitParams) -> CriticalSolver {
        let num = NumParams::new(lim);
        let conv = |v: &[Q]| v.iter().map(q_to_f64).collect::<Vec<f64>>();
        let mut scale = 1.0 + q_to_f64(lim.g_plus()) + q_to_f64(lim.g_minus());
        for a in lim.a_plus().iter().chain(lim.a_minus()).chain(lim.b_plus()).chain(lim.b_minus()) {
            scale += q_to_f64(&a.w) * (1.0 + q_to_f64(&a.x));
        }
        match ClearedPoly::new(lim) {
            Some(p) => CriticalSolver {
                num,
                a0: conv(&p.a0),
                ay: conv(&p.ay),
                b: conv(&p.b),
                rational: true,
                scale,
            },
            None => CriticalSolver { num, a0: vec![], ay: vec![], b: vec![], rational: false, scale },
        }
    }

    /// `F(w)` at parameter `z` and `y`.
    pub fn residual(&self, w: Complex64, z: Complex64, y: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.num.p_prime_unchecked(w - one) - (z + y) / w + y / (w - one)
    }

    fn d_residual(&self, w: Complex64, z: Complex64, y: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let u = w - one;
        self.num.p_second(u) + (z + y) / (w * w) - y / (u * u)
    }

    fn poly(&self, z: Complex64, y: f64) -> Vec<Complex64> {
        let n = self.a0.len().max(self.ay.len()).max(self.b.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        (0..n)
            .map(|i| Complex64::new(at(&self.a0, i) + y * at(&self.ay, i), 0.0) + z * at(&self.b, i))
            .collect()
    }

    /// All roots of the cleared equation (rational parameters only).
    pub fn all_roots(&self, z: Complex64, y: f64) -> Result<Vec<Complex64>> {
        if !self.rational {
            return Err(Error::InvalidParams("closed-form P' has no polynomial form".into()));
        }
        aberth(&self.poly(z, y), None)
    }

    /// Physical root at `z0`, reached along `z0 + i dir s` from `s = infinity`.
    pub fn track(&self, z0: Complex64, y: f64, dir: f64) -> Result<Complex64> {
        if !(y > 0.0) || !z0.re.is_finite() || !z0.im.is_finite() {
            return Err(Error::InvalidParams(format!("bad point z = {z0}, y = {y}")));
        }
        let i = Complex64::new(0.0, dir);
        let s0 = 1e4 * (1.0 + z0.norm() + self.scale + y);
        let s_min = 1e-10 * (1.0 + z0.norm());
        let z_at = |s: f64| z0 + i * s;
        let z_start = z_at(s0);
        let seed = Complex64::new(1.0, 0.0) + y / z_start;
        let mut state = if self.rational {
            let roots = aberth(&self.poly(z_start, y), None)?;
            let (w, ok) = select(&roots, seed);
            if !ok {
                return Err(Error::NoRoot(format!("ambiguous asymptotic root at z = {z_start}")));
            }
            Tracker::Roots { roots, w }
        } else {
            let w = self
                .newton(seed, z_start, y, 50)
                .ok_or_else(|| Error::NoRoot(format!("Newton failed at z = {z_start}")))?;
            Tracker::Single { w }
        };
        let mut s = s0;
        let mut h = H_INIT;
        let mut halvings = 0;
        loop {
            let done = s <= s_min;
            let s_next = if done { 0.0 } else { (s * (-h).exp()).max(s_min) };
            match self.step(&state, z_at(s), z_at(s_next), y, done) {
                Ok(StepOutcome::Accepted(w, roots)) => {
                    state.accept(w, roots);
                    if done {
                        return Ok(w);
                    }
                    s = s_next;
                    h = (h * 1.5).min(H_MAX);
                    halvings = 0;
                }
                Ok(StepOutcome::Rejected) => {
                    halvings += 1;
                    if done && halvings > MAX_HALVINGS {
                        // the root runs into a singularity of P' on the axis;
                        // its position at distance s_min is the limit to that precision
                        return Ok(state.w());
                    }
                    if halvings > MAX_HALVINGS {
                        return Err(Error::NoRoot(format!(
                            "continuation stalled near z = {} (y = {y})",
                            z_at(s)
                        )));
                    }
                    if done {
                        // the last hop to the axis is taken in sub-steps
                        let s_half = s * 0.5;
                        match self.step(&state, z_at(s), z_at(s_half), y, false)? {
                            StepOutcome::Accepted(w, roots) => {
                                state.accept(w, roots);
                                s = s_half;
                            }
                            StepOutcome::Rejected => s *= 0.5,
                        }
                        if s < 1e-300 {
                            return Err(Error::NoRoot(format!("no root at z = {z0}")));
                        }
                    } else {
                        h *= 0.5;
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn step(
        &self,
        state: &Tracker,
        z_prev: Complex64,
        z_new: Complex64,
        y: f64,
        last: bool,
    ) -> Result<StepOutcome> {
        match state {
            Tracker::Roots { roots, w } => {
                let new_roots = aberth(&self.poly(z_new, y), Some(roots))?;
                let (cand, ok) = select(&new_roots, *w);
                if last {
                    // on the real axis the conjugate partner may be close, so
                    // nearest wins; a root escaping to infinity (the degree
                    // drops) keeps its last finite position
                    let lost = new_roots.len() < roots.len() && !((cand - *w).norm() < 0.5 * (1.0 + w.norm()));
                    Ok(StepOutcome::Accepted(if lost { *w } else { cand }, new_roots))
                } else if ok {
                    Ok(StepOutcome::Accepted(cand, new_roots))
                } else {
                    Ok(StepOutcome::Rejected)
                }
            }
            Tracker::Single { w } => {
                let fw = self.d_residual(*w, z_prev, y);
                let pred = *w + (z_new - z_prev) / (*w * fw);
                match self.newton(pred, z_new, y, 12) {
                    Some(cand) => {
                        let moved = (pred - *w).norm();
                        let corr = (cand - pred).norm();
                        if corr <= 0.2 * moved + 1e-10 * (1.0 + cand.norm()) {
                            Ok(StepOutcome::Accepted(cand, vec![]))
                        } else {
                            Ok(StepOutcome::Rejected)
                        }
                    }
                    None => Ok(StepOutcome::Rejected),
                }
            }
        }
    }

    fn newton(&self, mut w: Complex64, z: Complex64, y: f64, iters: usize) -> Option<Complex64> {
        for _ in 0..iters {
            let f = self.residual(w, z, y);
            let df = self.d_residual(w, z, y);
            let dw = f / df;
            if !dw.re.is_finite() || !dw.im.is_finite() {
                return None;
            }
            w -= dw;
            if dw.norm() <= 1e-15 * (1.0 + w.norm()) {
                return Some(w);
            }
        }
        let f = self.residual(w, z, y);
        let df = self.d_residual(w, z, y);
        if (f / df).norm() <= 1e-12 * (1.0 + w.norm()) {
            Some(w)
        } else {
            None
        }
    }
}

enum Tracker {
    Roots { roots: Vec<Complex64>, w: Complex64 },
    Single { w: Complex64 },
}

impl Tracker {
    fn w(&self) -> Complex64 {
        match self {
            Tracker::Roots { w, .. } | Tracker::Single { w } => *w,
        }
    }

    fn accept(&mut self, w_new: Complex64, new_roots: Vec<Complex64>) {
        match self {
            Tracker::Roots { roots, w } => {
                *roots = new_roots;
                *w = w_new;
            }
            Tracker::Single { w } => *w = w_new,
        }
    }
}

/// Nearest root to `target`, and whether it is unambiguously nearest.
fn select(roots: &[Complex64], target: Complex64) -> (Complex64, bool) {
    let mut best = (f64::INFINITY, Complex64::new(f64::NAN, f64::NAN));
    let mut second = f64::INFINITY;
    for &r in roots {
        let d = (r - target).norm();
        if d < best.0 {
            second = best.0;
            best = (d, r);
        } else if d < second {
            second = d;
        }
    }
    (best.1, best.0 * 3.0 < second)
}

/// `|arg w| / pi`, snapping nearly real roots to exactly 0 or 1.
pub fn density_from_root(w: Complex64) -> f64 {
    if w.im.abs() <= REAL_TOL * w.norm() {
        if w.re < 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        w.arg().abs() / std::f64::consts::PI
    }
}
