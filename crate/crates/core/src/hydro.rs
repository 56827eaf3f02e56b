//! Height function and growth velocities of the limit shape.
//!
//! `S(z) = P(1/z - 1) + x log z + y log(1 - z)`; its critical point `z_+` in
//! the closed upper half-plane is `1/conj(w)` for the physical root `w` of the
//! limit-shape critical equation at `(x, y)`.

use crate::charparams::{LimitParams, NumParams};
use crate::critical::{CriticalSolver, REAL_TOL};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Offset above the real axis used to pick branches at a real `z_+`.
const ABOVE_AXIS: f64 = 1e-150;

/// Critical point of `S` and the value of `S` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub z_plus: Complex64,
    pub s_value: Complex64,
}

impl CriticalPoint {
    /// True when `z_+` is real (density 0 or 1, no growth formula applies).
    pub fn is_frozen(&self) -> bool {
        self.z_plus.im == 0.0
    }

    /// `(1/pi) arg z_+`, the density at `(x, y)`.
    pub fn density(&self) -> f64 {
        self.z_plus.arg().abs() / PI
    }

    /// Point where branches are evaluated: `z_+`, nudged above a real axis value.
    fn eval_point(&self) -> Complex64 {
        if self.is_frozen() {
            Complex64::new(self.z_plus.re, ABOVE_AXIS)
        } else {
            self.z_plus
        }
    }
}

/// Height and velocity evaluator for one parameter set.
#[derive(Clone, Debug)]
pub struct Hydro {
    solver: CriticalSolver,
    num: NumParams,
}

impl Hydro {
    pub fn new(lim: &LimitParams) -> Self {
        Hydro { solver: CriticalSolver::new(lim), num: NumParams::new(lim) }
    }

    /// `S(z)` with principal-branch logarithms.
    pub fn s(&self, z: Complex64, x: f64, y: f64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        Ok(self.num.p(one / z - one)? + x * z.ln() + y * (one - z).ln())
    }

    /// `S'(z) = -P'(1/z - 1)/z^2 + x/z - y/(1 - z)`.
    pub fn s_prime(&self, z: Complex64, x: f64, y: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        -self.num.p_prime_unchecked(one / z - one) / (z * z) + x / z - y / (one - z)
    }

    pub fn critical_point(&self, x: f64, y: f64) -> Result<CriticalPoint> {
        if !(y > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParams(format!("need finite x and y > 0 (got x = {x}, y = {y})")));
        }
        let w = self.solver.track(Complex64::new(x, 0.0), y, -1.0)?;
        if !(w.norm() > 0.0) || !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::NoRoot(format!("degenerate critical root at x = {x}, y = {y}")));
        }
        let z_plus = if w.im.abs() <= REAL_TOL * w.norm() {
            Complex64::new(1.0 / w.re, 0.0)
        } else {
            (Complex64::new(1.0, 0.0) / w).conj()
        };
        let mut cp = CriticalPoint { x, y, z_plus, s_value: Complex64::new(0.0, 0.0) };
        cp.s_value = self.s(cp.eval_point(), x, y)?;
        Ok(cp)
    }

    /// `h(x, y) = -(1/pi) Im S(z_+)`.
    pub fn height(&self, x: f64, y: f64) -> Result<f64> {
        Ok(-self.critical_point(x, y)?.s_value.im / PI)
    }

    /// Limit shape `w(x) = x + 2 h(x, 1)`, since `h(x, 1)` is the mass right of `x`.
    pub fn shape_value(&self, x: f64) -> Result<f64> {
        Ok(x + 2.0 * self.height(x, 1.0)?)
    }
}

/// See [`Hydro::critical_point`].
pub fn critical_point(lim: &LimitParams, x: f64, y: f64) -> Result<CriticalPoint> {
    Hydro::new(lim).critical_point(x, y)
}

/// See [`Hydro::height`].
pub fn height(lim: &LimitParams, x: f64, y: f64) -> Result<f64> {
    Hydro::new(lim).height(x, y)
}

/// Which parameters grow, with their value (or the `gamma` growth rate).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VelocityKind {
    AlphaPlus(f64),
    BetaPlus(f64),
    AlphaMinus(f64),
    BetaMinus(f64),
    GammaPlus(f64),
    GammaMinus(f64),
}

impl VelocityKind {
    pub const NAMES: [&'static str; 6] =
        ["alpha_plus", "beta_plus", "alpha_minus", "beta_minus", "gamma_plus", "gamma_minus"];

    pub fn from_name(name: &str, value: f64) -> Result<Self> {
        let kind = match name {
            "alpha_plus" => VelocityKind::AlphaPlus(value),
            "beta_plus" => VelocityKind::BetaPlus(value),
            "alpha_minus" => VelocityKind::AlphaMinus(value),
            "beta_minus" => VelocityKind::BetaMinus(value),
            "gamma_plus" => VelocityKind::GammaPlus(value),
            "gamma_minus" => VelocityKind::GammaMinus(value),
            other => return Err(Error::InvalidParams(format!("unknown velocity kind {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            VelocityKind::AlphaPlus(a) | VelocityKind::AlphaMinus(a) => a > 0.0 && a.is_finite(),
            VelocityKind::BetaPlus(b) => b > 0.0 && b < 1.0,
            VelocityKind::BetaMinus(b) => b > 0.0 && b <= 1.0,
            VelocityKind::GammaPlus(g) | VelocityKind::GammaMinus(g) => g.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("parameter out of range in {self:?}")))
        }
    }
}

/// `dh/dt` when parameters of one kind are added at unit rate.
pub fn velocity(kind: VelocityKind, cp: &CriticalPoint) -> Result<f64> {
    kind.validate()?;
    if cp.is_frozen() {
        return Err(Error::Frozen { x: cp.x, y: cp.y });
    }
    let z = cp.z_plus;
    let v = match kind {
        VelocityKind::AlphaPlus(a) => ((z - a / (1.0 + a)).arg() - z.arg()) / PI,
        VelocityKind::BetaPlus(b) => (z.arg() - (z + b / (1.0 - b)).arg()) / PI,
        VelocityKind::AlphaMinus(a) => ((z - (1.0 + a) / a).arg() - PI) / PI,
        VelocityKind::BetaMinus(b) => -(z + (1.0 - b) / b).arg() / PI,
        VelocityKind::GammaPlus(g) => -g / PI * (1.0 / z).im,
        VelocityKind::GammaMinus(g) => -g / PI * z.im,
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charparams::Atom;
    use crate::fps::{qf, qi, Q};
    use crate::limitshape::density_at;

    fn cp_at(z: Complex64) -> CriticalPoint {
        CriticalPoint { x: 0.0, y: 1.0, z_plus: z, s_value: Complex64::new(0.0, 0.0) }
    }

    fn multi_alpha(alpha: Q, a: Q) -> LimitParams {
        LimitParams::new(qi(0), qi(0), vec![Atom::new(alpha, a)], vec![], vec![], vec![]).unwrap()
    }

    #[test]
    fn trivial_critical_points() {
        let t = LimitParams::trivial();
        let c = critical_point(&t, -0.5, 1.0).unwrap();
        assert!((c.z_plus - Complex64::new(-1.0, 0.0)).norm() < 1e-12, "{}", c.z_plus);
        assert_eq!(c.density(), 1.0);
        let c = critical_point(&t, 1.0, 1.0).unwrap();
        assert!((c.z_plus - Complex64::new(0.5, 0.0)).norm() < 1e-12, "{}", c.z_plus);
        assert_eq!(c.density(), 0.0);
    }

    #[test]
    fn plancherel_quarter() {
        let c = critical_point(&LimitParams::plancherel(qi(1)).unwrap(), 1.0, 1.0).unwrap();
        assert!((c.density() - 0.25).abs() < 1e-12);
        assert!(c.z_plus.im > 0.0);
    }

    #[test]
    fn trivial_heights() {
        let t = Hydro::new(&LimitParams::trivial());
        assert!(t.height(0.5, 1.0).unwrap().abs() < 1e-100);
        assert!((t.height(-1.2, 1.0).unwrap() - 1.0).abs() < 1e-2);
        assert!((t.height(-0.3, 1.0).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn height_slope_is_density() {
        let h = Hydro::new(&LimitParams::plancherel(qi(1)).unwrap());
        let d = 1e-4;
        let slope = -(h.height(1.0 + d, 1.0).unwrap() - h.height(1.0 - d, 1.0).unwrap()) / (2.0 * d);
        assert!((slope - 0.25).abs() < 1e-4, "{slope}");
    }

    #[test]
    fn velocity_examples() {
        let i = cp_at(Complex64::new(0.0, 1.0));
        assert!((velocity(VelocityKind::GammaPlus(1.0), &i).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((velocity(VelocityKind::GammaMinus(1.0), &i).unwrap() + 1.0 / PI).abs() < 1e-15);
        let v = velocity(VelocityKind::AlphaPlus(1.0), &i).unwrap();
        assert!((v - (1f64.atan2(-0.5) - PI / 2.0) / PI).abs() < 1e-15);
        assert!((v - 0.1476).abs() < 1e-4);
        let frozen = cp_at(Complex64::new(0.5, 0.0));
        assert!(matches!(velocity(VelocityKind::GammaPlus(1.0), &frozen), Err(Error::Frozen { .. })));
    }

    #[test]
    fn critical_point_is_stationary() {
        let h = Hydro::new(&multi_alpha(qi(1), qi(1)));
        for (x, y) in [(0.5, 1.0), (2.0, 0.7), (1.0, 2.0)] {
            let c = h.critical_point(x, y).unwrap();
            assert!(h.s_prime(c.z_plus, x, y).norm() <= 1e-9, "({x}, {y})");
        }
    }

    #[test]
    fn unit_y_matches_density() {
        let lim = multi_alpha(qi(1), qf(1, 4));
        let h = Hydro::new(&lim);
        for x in [-0.9, -0.3, 0.4, 1.2, 2.5] {
            let c = h.critical_point(x, 1.0).unwrap();
            assert!((c.density() - density_at(&lim, x, REAL_TOL).unwrap()).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn shape_value_matches_integrated_density() {
        use crate::limitshape::{density_curve, shape_function};
        let lim = LimitParams::plancherel(qi(1)).unwrap();
        let sc = shape_function(&density_curve(&lim, -1.5, 3.5, 4001, REAL_TOL).unwrap());
        let h = Hydro::new(&lim);
        for x in [-1.2, -0.5, 0.3, 1.7, 2.9, 3.2] {
            let w = h.shape_value(x).unwrap();
            assert!((w - sc.at(x)).abs() < 1e-5, "x={x}: {w} vs {}", sc.at(x));
        }
        assert_eq!(h.shape_value(3.2).unwrap(), 3.2);
    }

    /// `dh/dt` by central differences, adding the growing parameters to `base`.
    fn fd_velocity(base: &LimitParams, add: impl Fn(Q) -> LimitParams, x: f64, y: f64) -> f64 {
        let dt = qf(1, 10000);
        let hp = height(&base.combine(&add(dt.clone())).unwrap(), x, y).unwrap();
        let hm = height(base, x, y).unwrap();
        // one-sided in t at the base point, refined by a second step
        let hp2 = height(&base.combine(&add(dt * qi(2))).unwrap(), x, y).unwrap();
        (4.0 * hp - 3.0 * hm - hp2) / (2.0 * 1e-4)
    }

    #[test]
    fn velocities_match_parameter_growth() {
        let base = multi_alpha(qf(1, 2), qi(1)).combine(&LimitParams::plancherel(qi(1)).unwrap()).unwrap();
        let (x, y) = (0.8, 1.0);
        let c = critical_point(&base, x, y).unwrap();
        assert!(!c.is_frozen());
        let z = qi(0);
        let cases: Vec<(VelocityKind, Box<dyn Fn(Q) -> LimitParams>)> = vec![
            (VelocityKind::AlphaPlus(0.5), Box::new(|t| multi_alpha(qf(1, 2), t))),
            (
                VelocityKind::BetaPlus(0.25),
                Box::new(|t| LimitParams::new(qi(0), qi(0), vec![], vec![], vec![Atom::new(qf(1, 4), t)], vec![]).unwrap()),
            ),
            (
                VelocityKind::AlphaMinus(0.5),
                Box::new(|t| LimitParams::new(qi(0), qi(0), vec![], vec![Atom::new(qf(1, 2), t)], vec![], vec![]).unwrap()),
            ),
            (
                VelocityKind::BetaMinus(0.25),
                Box::new(|t| LimitParams::new(qi(0), qi(0), vec![], vec![], vec![], vec![Atom::new(qf(1, 4), t)]).unwrap()),
            ),
            (VelocityKind::GammaPlus(1.0), Box::new(|t| LimitParams::plancherel(t).unwrap())),
            (VelocityKind::GammaMinus(1.0), Box::new(move |t| LimitParams::new(z.clone(), t, vec![], vec![], vec![], vec![]).unwrap())),
        ];
        for (kind, add) in cases {
            let v = velocity(kind, &c).unwrap();
            let fd = fd_velocity(&base, add, x, y);
            assert!((v - fd).abs() < 1e-5, "{kind:?}: formula {v}, growth {fd}");
        }
    }
}
