//! Shape function `w` with `w' = 1 - 2p` and `w(x) = x` right of the support.

use super::density::DensityCurve;
use crate::io::csv;
use serde::Serialize;

/// Sampled shape function on the density grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeCurve {
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
}

/// Cumulative trapezoid of `1 - 2p` from the right end, where `w(x) = x`.
pub fn shape_function(d: &DensityCurve) -> ShapeCurve {
    let n = d.xs.len();
    let mut ws = vec![0.0; n];
    ws[n - 1] = d.xs[n - 1];
    for i in (0..n - 1).rev() {
        let dx = d.xs[i + 1] - d.xs[i];
        let slope = 1.0 - (d.ps[i] + d.ps[i + 1]);
        ws[i] = ws[i + 1] - dx * slope;
    }
    ShapeCurve { xs: d.xs.clone(), ws }
}

impl ShapeCurve {
    /// `x,w` CSV.
    pub fn to_csv(&self) -> String {
        let rows: Vec<[f64; 2]> = self.xs.iter().zip(&self.ws).map(|(&x, &w)| [x, w]).collect();
        csv("x,w", rows.iter().map(|r| &r[..]))
    }

    /// Largest violation of the 1-Lipschitz bound between neighbours.
    pub fn lipschitz_excess(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ws.windows(2))
            .map(|(x, w)| (w[1] - w[0]).abs() - (x[1] - x[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Linear interpolation of `w`; `x` right of the grid and `x + 2` left of it.
    pub fn at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return x;
        }
        if x <= self.xs[0] {
            return x + 2.0;
        }
        let j = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1);
        let t = (x - self.xs[j - 1]) / (self.xs[j] - self.xs[j - 1]);
        self.ws[j - 1] * (1.0 - t) + self.ws[j] * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charparams::LimitParams;
    use crate::fps::qi;
    use crate::limitshape::density::density_curve;

    #[test]
    fn trivial_shape_is_minus_x() {
        let d = density_curve(&LimitParams::trivial(), -2.0, 1.0, 301, crate::critical::REAL_TOL).unwrap();
        let s = shape_function(&d);
        for x in [-0.9, -0.5, -0.1] {
            assert!((s.at(x) + x).abs() < 1e-3, "w({x}) = {}", s.at(x));
        }
        assert!((s.at(-1.5) - 0.5).abs() < 1e-3);
        assert!(s.lipschitz_excess() < 1e-12);
    }

    #[test]
    fn plancherel_endpoints() {
        let d = density_curve(&LimitParams::plancherel(qi(1)).unwrap(), -2.0, 4.0, 601, crate::critical::REAL_TOL).unwrap();
        let s = shape_function(&d);
        assert!((s.at(3.0) - 3.0).abs() < 1e-3);
        assert!((s.at(-1.0) - 1.0).abs() < 1e-3);
        assert!(s.lipschitz_excess() < 1e-12);
    }
}
