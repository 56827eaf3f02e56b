//! Limit density on a grid, its support and its plateaus.

use crate::charparams::LimitParams;
use crate::critical::{density_from_root, CriticalSolver, REAL_TOL};
use crate::error::{Error, Result};
use crate::io::{csv, fmt_num};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Density above this value marks the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-9;
/// `|p - 1|` below this value marks a plateau point.
pub const PLATEAU_TOL: f64 = 1e-9;

/// Sampled limit density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCurve {
    /// Hull of the points with `p > SUPPORT_THRESHOLD`.
    pub support: (f64, f64),
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// Maximal runs of at least three points with `p = 1`.
    pub flat_regions: Vec<(f64, f64)>,
}

/// Evaluates densities for one parameter set.
#[derive(Clone, Debug)]
pub struct DensityEvaluator {
    solver: CriticalSolver,
    tol: f64,
}

impl DensityEvaluator {
    pub fn new(lim: &LimitParams) -> Self {
        DensityEvaluator { solver: CriticalSolver::new(lim), tol: REAL_TOL }
    }

    /// Roots with relative imaginary part below `tol` count as real.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Root in the closed upper half-plane at real `x`.
    pub fn root(&self, x: f64) -> Result<Complex64> {
        self.solver.track(Complex64::new(x, 0.0), 1.0, -1.0)
    }

    pub fn at(&self, x: f64) -> Result<f64> {
        let w = self.root(x)?;
        if w.im.abs() <= self.tol * w.norm() {
            Ok(if w.re < 0.0 { 1.0 } else { 0.0 })
        } else {
            Ok(density_from_root(w))
        }
    }

    pub fn solver(&self) -> &CriticalSolver {
        &self.solver
    }
}

/// `arg(w0)/pi` at `x`, where `w0` is the physical root in the upper half-plane.
///
/// Roots with relative imaginary part below `tol` count as real.
pub fn density_at(lim: &LimitParams, x: f64, tol: f64) -> Result<f64> {
    DensityEvaluator::new(lim).with_tol(tol).at(x)
}

/// Density on `n_grid` uniform points of `[xmin, xmax]`, with support and
/// plateau transitions refined by bisection and inserted into the grid.
pub fn density_curve(
    lim: &LimitParams,
    xmin: f64,
    xmax: f64,
    n_grid: usize,
    tol: f64,
) -> Result<DensityCurve> {
    if !(xmin < xmax) || n_grid < 2 {
        return Err(Error::InvalidParams(format!(
            "need xmin < xmax and at least 2 grid points (got [{xmin}, {xmax}], {n_grid})"
        )));
    }
    let ev = DensityEvaluator::new(lim).with_tol(tol);
    let h = (xmax - xmin) / (n_grid - 1) as f64;
    let xs: Vec<f64> = (0..n_grid).map(|i| if i + 1 == n_grid { xmax } else { xmin + h * i as f64 }).collect();
    let ps: Vec<f64> = xs.par_iter().map(|&x| ev.at(x)).collect::<Result<_>>()?;
    // well inside the required h/100, so jumps cost little in the trapezoid
    let width = h * 1e-5;

    let positive = |p: f64| p > SUPPORT_THRESHOLD;
    let flat = |p: f64| (p - 1.0).abs() < PLATEAU_TOL;
    let brackets: Vec<usize> = (0..n_grid - 1)
        .filter(|&i| positive(ps[i]) != positive(ps[i + 1]) || flat(ps[i]) != flat(ps[i + 1]))
        .collect();
    let extra: Vec<Vec<(f64, f64)>> = brackets
        .par_iter()
        .map(|&i| {
            let mut out = Vec::new();
            if positive(ps[i]) != positive(ps[i + 1]) {
                out.extend(bisect(&ev, (xs[i], ps[i]), (xs[i + 1], ps[i + 1]), positive, width)?);
            }
            if flat(ps[i]) != flat(ps[i + 1]) {
                out.extend(bisect(&ev, (xs[i], ps[i]), (xs[i + 1], ps[i + 1]), flat, width)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut pts: Vec<(f64, f64)> = xs.into_iter().zip(ps).collect();
    pts.extend(extra.into_iter().flatten().filter(|p| p.0 >= xmin && p.0 <= xmax));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    let (xs, ps): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();

    let pos: Vec<usize> = (0..xs.len()).filter(|&i| positive(ps[i])).collect();
    let support = match (pos.first(), pos.last()) {
        (Some(&a), Some(&b)) => (xs[a], xs[b]),
        _ => (f64::NAN, f64::NAN),
    };
    let mut flat_regions = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if flat(ps[i]) {
            let start = i;
            while i + 1 < xs.len() && flat(ps[i + 1]) {
                i += 1;
            }
            if i - start + 1 >= 3 {
                flat_regions.push((xs[start], xs[i]));
            }
        }
        i += 1;
    }
    Ok(DensityCurve { support, xs, ps, flat_regions })
}

/// Shrinks a bracket of an indicator change to `width`; returns both ends
/// and one point just outside each, so a jump sitting exactly on a bracket
/// end still enters the trapezoid with its one-sided values.
fn bisect(
    ev: &DensityEvaluator,
    mut lo: (f64, f64),
    mut hi: (f64, f64),
    ind: impl Fn(f64) -> bool,
    width: f64,
) -> Result<Vec<(f64, f64)>> {
    let side = ind(lo.1);
    while hi.0 - lo.0 > width {
        let m = 0.5 * (lo.0 + hi.0);
        let pm = ev.at(m)?;
        if ind(pm) == side {
            lo = (m, pm);
        } else {
            hi = (m, pm);
        }
    }
    let outer_lo = lo.0 - width;
    let outer_hi = hi.0 + width;
    Ok(vec![(outer_lo, ev.at(outer_lo)?), lo, hi, (outer_hi, ev.at(outer_hi)?)])
}

impl DensityCurve {
    /// Trapezoidal integral of `p`.
    pub fn mass(&self) -> f64 {
        self.moment(0)
    }

    /// Trapezoidal integral of `x^k p(x)`.
    pub fn moment(&self, k: u32) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ps.windows(2))
            .map(|(x, p)| 0.5 * (x[1] - x[0]) * (x[0].powi(k as i32) * p[0] + x[1].powi(k as i32) * p[1]))
            .sum()
    }

    /// Linear interpolation of `p`; 0 outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return 0.0;
        }
        let j = self.xs.partition_point(|&v| v <= x).min(self.xs.len() - 1).max(1);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        self.ps[j - 1] * (1.0 - t) + self.ps[j] * t
    }

    /// `x,p` CSV.
    pub fn to_csv(&self) -> String {
        let rows: Vec<[f64; 2]> = self.xs.iter().zip(&self.ps).map(|(&x, &p)| [x, p]).collect();
        csv("x,p", rows.iter().map(|r| &r[..]))
    }

    /// Support and plateaus as JSON.
    pub fn sidecar_json(&self) -> String {
        let pair = |(a, b): (f64, f64)| format!("[{}, {}]", fmt_num(a), fmt_num(b));
        let flats: Vec<String> = self.flat_regions.iter().map(|&r| pair(r)).collect();
        format!(
            "{{\"support\": {}, \"flat_regions\": [{}], \"points\": {}}}\n",
            pair(self.support),
            flats.join(", "),
            self.xs.len()
        )
    }
}
