//! Named parameter families with closed-form limit densities and Stieltjes
//! transforms.

use crate::charparams::{Atom, ClosedForm, LimitParams};
use crate::critical::CriticalSolver;
use crate::error::{Error, Result};
use crate::fps::{q_to_f64, qi, Q};
use num_complex::Complex64;
use num_traits::Signed;
use std::f64::consts::PI;

/// A named family of limit parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    /// `gamma_plus = gamma N`.
    Planch { gamma: Q },
    /// `[a N]` copies of `alpha_plus = alpha`.
    MultiAlpha { alpha: Q, a: Q },
    /// `[b N]` copies of `beta_plus = beta`.
    MultiBeta { beta: Q, b: Q },
    /// `gamma_plus = gamma1 N`, `gamma_minus = gamma2 N`.
    TwoSidedPlanch { gamma1: Q, gamma2: Q },
    /// `[a N]` copies of `alpha_plus = alpha` and `[a_tilde N]` of `alpha_minus = alpha_tilde`.
    AlphaPm { alpha: Q, a: Q, alpha_tilde: Q, a_tilde: Q },
    /// `alpha_plus_i = i/N`, `i = 1..N`.
    Continuous,
}

/// Preset names accepted by [`Preset::from_name`].
pub const PRESET_NAMES: [&str; 6] =
    ["planch", "multi_alpha", "multi_beta", "two_sided_planch", "alpha_pm", "continuous"];

fn positive(name: &str, v: &Q) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {v}")))
    }
}

fn nonnegative(name: &str, v: &Q) -> Result<()> {
    if v.is_negative() {
        Err(Error::InvalidParams(format!("{name} must be nonnegative, got {v}")))
    } else {
        Ok(())
    }
}

impl Preset {
    pub fn planch(gamma: Q) -> Result<Self> {
        positive("gamma", &gamma)?;
        Ok(Preset::Planch { gamma })
    }

    pub fn multi_alpha(alpha: Q, a: Q) -> Result<Self> {
        positive("alpha", &alpha)?;
        positive("a", &a)?;
        Ok(Preset::MultiAlpha { alpha, a })
    }

    pub fn multi_beta(beta: Q, b: Q) -> Result<Self> {
        positive("beta", &beta)?;
        positive("b", &b)?;
        if beta > qi(1) {
            return Err(Error::InvalidParams(format!("beta must be at most 1, got {beta}")));
        }
        Ok(Preset::MultiBeta { beta, b })
    }

    pub fn two_sided_planch(gamma1: Q, gamma2: Q) -> Result<Self> {
        nonnegative("gamma1", &gamma1)?;
        nonnegative("gamma2", &gamma2)?;
        Ok(Preset::TwoSidedPlanch { gamma1, gamma2 })
    }

    pub fn alpha_pm(alpha: Q, a: Q, alpha_tilde: Q, a_tilde: Q) -> Result<Self> {
        positive("alpha", &alpha)?;
        positive("a", &a)?;
        positive("alpha_tilde", &alpha_tilde)?;
        positive("a_tilde", &a_tilde)?;
        Ok(Preset::AlphaPm { alpha, a, alpha_tilde, a_tilde })
    }

    /// Builds a preset from its name and a parameter lookup.
    pub fn from_name(name: &str, get: impl Fn(&str) -> Option<Q>) -> Result<Self> {
        let need = |k: &str| {
            get(k).ok_or_else(|| Error::InvalidParams(format!("preset {name} needs parameter {k}")))
        };
        match name {
            "planch" => Preset::planch(need("gamma")?),
            "multi_alpha" => Preset::multi_alpha(need("alpha")?, need("a")?),
            "multi_beta" => Preset::multi_beta(need("beta")?, need("b")?),
            "two_sided_planch" => Preset::two_sided_planch(need("gamma1")?, need("gamma2")?),
            "alpha_pm" => {
                Preset::alpha_pm(need("alpha")?, need("a")?, need("alpha_tilde")?, need("a_tilde")?)
            }
            "continuous" => Ok(Preset::Continuous),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Planch { .. } => "planch",
            Preset::MultiAlpha { .. } => "multi_alpha",
            Preset::MultiBeta { .. } => "multi_beta",
            Preset::TwoSidedPlanch { .. } => "two_sided_planch",
            Preset::AlphaPm { .. } => "alpha_pm",
            Preset::Continuous => "continuous",
        }
    }

    /// The scaling-limit data of the family.
    pub fn limit_params(&self) -> LimitParams {
        let z = qi(0);
        let built = match self {
            Preset::Planch { gamma } => LimitParams::plancherel(gamma.clone()),
            Preset::MultiAlpha { alpha, a } => LimitParams::new(
                z.clone(),
                z,
                vec![Atom::new(alpha.clone(), a.clone())],
                vec![],
                vec![],
                vec![],
            ),
            Preset::MultiBeta { beta, b } => LimitParams::new(
                z.clone(),
                z,
                vec![],
                vec![],
                vec![Atom::new(beta.clone(), b.clone())],
                vec![],
            ),
            Preset::TwoSidedPlanch { gamma1, gamma2 } => {
                LimitParams::new(gamma1.clone(), gamma2.clone(), vec![], vec![], vec![], vec![])
            }
            Preset::AlphaPm { alpha, a, alpha_tilde, a_tilde } => LimitParams::new(
                z.clone(),
                z,
                vec![Atom::new(alpha.clone(), a.clone())],
                vec![Atom::new(alpha_tilde.clone(), a_tilde.clone())],
                vec![],
                vec![],
            ),
            Preset::Continuous => return LimitParams::from_closed_form(ClosedForm::Continuous),
        };
        built.expect("preset constructors validate their parameters")
    }

    /// True when a closed-form density is available.
    pub fn has_closed_density(&self) -> bool {
        matches!(self, Preset::Planch { .. } | Preset::MultiAlpha { .. } | Preset::MultiBeta { .. })
    }

    /// Arccos band `[e1, e2]` of the closed-form density.
    pub fn band(&self) -> Option<(f64, f64)> {
        match self {
            Preset::Planch { gamma } => {
                let g = q_to_f64(gamma);
                Some((g - 2.0 * g.sqrt(), g + 2.0 * g.sqrt()))
            }
            Preset::MultiAlpha { alpha, a } => {
                let (al, a) = (q_to_f64(alpha), q_to_f64(a));
                let c = al * (a + 1.0);
                let r = 2.0 * (a * al * (al + 1.0)).sqrt();
                Some((c - r, c + r))
            }
            Preset::MultiBeta { beta, b } => {
                let (be, b) = (q_to_f64(beta), q_to_f64(b));
                let c = be * (b - 1.0);
                let r = 2.0 * (b * be * (1.0 - be)).sqrt();
                Some((c - r, c + r))
            }
            _ => None,
        }
    }

    /// Points where the closed-form density is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if let Some((e1, e2)) = self.band() {
            v.extend([e1, e2, -1.0]);
        }
        match self {
            Preset::MultiAlpha { a, .. } => v.push(-q_to_f64(a)),
            Preset::MultiBeta { b, .. } => v.push(q_to_f64(b)),
            _ => {}
        }
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
        v
    }
}

fn arccos_pi(v: f64) -> f64 {
    v.clamp(-1.0, 1.0).acos() / PI
}

/// The closed-form limit density of `planch`, `multi_alpha` or `multi_beta`.
pub fn preset_density(p: &Preset, x: f64) -> Result<f64> {
    let (e1, e2) = p
        .band()
        .ok_or_else(|| Error::InvalidParams(format!("preset {} has no closed-form density", p.name())))?;
    let in_band = x >= e1 && x <= e2;
    match p {
        Preset::Planch { gamma } => {
            let g = q_to_f64(gamma);
            if in_band {
                Ok(arccos_pi((x + g) / (2.0 * (g * (x + 1.0)).sqrt())))
            } else if g < 1.0 && x >= -1.0 && x < e1 {
                Ok(1.0)
            } else {
                Ok(0.0)
            }
        }
        Preset::MultiAlpha { alpha, a } => {
            let (al, a) = (q_to_f64(alpha), q_to_f64(a));
            if in_band {
                let den = 2.0 * (al * (al + 1.0) * (x + 1.0) * (x + a)).sqrt();
                Ok(arccos_pi((al * (a + 1.0) + (2.0 * al + 1.0) * x) / den))
            } else if a <= al / (al + 1.0) {
                Ok(if x >= -1.0 && x <= -a { 1.0 } else { 0.0 })
            } else if a <= (al + 1.0) / al {
                Ok(if x >= -1.0 && x < e1 { 1.0 } else { 0.0 })
            } else {
                Ok(0.0)
            }
        }
        Preset::MultiBeta { beta, b } => {
            let (be, b) = (q_to_f64(beta), q_to_f64(b));
            let num = (1.0 - 2.0 * be) * x + be * (b - 1.0);
            let var = be * (1.0 - be);
            if in_band && var > 0.0 {
                let den = 2.0 * (var * (1.0 + x) * (b - x)).sqrt();
                Ok(arccos_pi(num / den))
            } else if num < 0.0 && x >= -1.0 && x <= b {
                Ok(1.0)
            } else {
                Ok(0.0)
            }
        }
        _ => unreachable!("band() is None for the remaining presets"),
    }
}

/// `sqrt(z - e1) sqrt(z - e2)`: analytic off `[e1, e2]`, `~ z` at infinity.
fn band_sqrt(z: Complex64, e1: f64, e2: f64) -> Complex64 {
    (z - e1).sqrt() * (z - e2).sqrt()
}

fn guard(z: Complex64, at: f64, what: &str) -> Result<()> {
    if (z - at).norm() < 1e-14 * (1.0 + at.abs()) {
        Err(Error::SingularPoint(format!("z = {z} hits the {what} {at}")))
    } else {
        Ok(())
    }
}

/// Stieltjes transform `int p(t) dt / (z - t)` of the preset's limit measure.
///
/// Closed forms for `planch`, `multi_alpha`, `multi_beta`; the remaining
/// presets use `log w0(z)` with `w0` continued from `z = infinity`.
pub fn preset_stieltjes(p: &Preset, z: Complex64) -> Result<Complex64> {
    if z.im < 0.0 {
        return preset_stieltjes(p, z.conj()).map(|v| v.conj());
    }
    if let Some((e1, e2)) = p.band() {
        guard(z, e1, "branch point")?;
        guard(z, e2, "branch point")?;
        let r = band_sqrt(z, e1, e2);
        let w = match p {
            Preset::Planch { gamma } => {
                let g = q_to_f64(gamma);
                (z + g - r) / (2.0 * g)
            }
            Preset::MultiAlpha { alpha, a } => {
                let (al, a) = (q_to_f64(alpha), q_to_f64(a));
                guard(z, -a, "pole")?;
                (al * (a + 1.0) + (2.0 * al + 1.0) * z - r) / (2.0 * al * (a + z))
            }
            Preset::MultiBeta { beta, b } => {
                let (be, b) = (q_to_f64(beta), q_to_f64(b));
                guard(z, b, "pole")?;
                (z * (1.0 - 2.0 * be) + be * (b - 1.0) - r) / (2.0 * be * (b - z))
            }
            _ => unreachable!("band() is None for the remaining presets"),
        };
        return Ok(w.ln());
    }
    stieltjes_by_tracking(&CriticalSolver::new(&p.limit_params()), z)
}

/// `log w0(z)` for `Im z >= 0`, following the root from `z + i infinity`.
pub fn stieltjes_by_tracking(solver: &CriticalSolver, z: Complex64) -> Result<Complex64> {
    if z.im < 0.0 {
        return stieltjes_by_tracking(solver, z.conj()).map(|v| v.conj());
    }
    let w = solver.track(z, 1.0, 1.0)?;
    if z.im == 0.0 && (w.im.abs() > 1e-12 * w.norm() || w.re <= 0.0) {
        return Err(Error::SingularPoint(format!("z = {} lies on the support", z.re)));
    }
    Ok(w.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::qf;

    #[test]
    fn closed_density_examples() {
        let p = Preset::planch(qi(1)).unwrap();
        assert!((preset_density(&p, 1.0).unwrap() - 0.25).abs() < 1e-15);
        let p = Preset::planch(qf(1, 4)).unwrap();
        assert_eq!(preset_density(&p, -0.9).unwrap(), 1.0);
        let p = Preset::multi_beta(qf(1, 3), qi(1)).unwrap();
        assert_eq!(preset_density(&p, 5.0).unwrap(), 0.0);
        let p = Preset::multi_beta(qf(1, 2), qi(1)).unwrap();
        assert!((preset_density(&p, 0.3).unwrap() - 0.5).abs() < 1e-15);
        let p = Preset::multi_alpha(qi(1), qf(1, 4)).unwrap();
        assert_eq!(preset_density(&p, -0.5).unwrap(), 1.0);
        assert_eq!(preset_density(&p, -0.2).unwrap(), 0.0);
        assert!(preset_density(&Preset::Continuous, 0.0).is_err());
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(Preset::from_name("nope", |_| None), Err(Error::UnknownPreset(_))));
        assert!(Preset::from_name("planch", |_| None).is_err());
        assert!(Preset::from_name("planch", |_| Some(qi(1))).is_ok());
    }

    #[test]
    fn stieltjes_decay() {
        let p = Preset::planch(qi(1)).unwrap();
        let v = preset_stieltjes(&p, Complex64::new(100.0, 0.0)).unwrap();
        assert!((v.re - 0.01).abs() < 2e-2 * 0.01 + 1e-4);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn two_sided_planch_zero_is_trivial() {
        let p = Preset::two_sided_planch(qi(0), qi(0)).unwrap();
        for z in [Complex64::new(0.3, 0.4), Complex64::new(-2.0, 0.1), Complex64::new(3.0, 0.0)] {
            let v = preset_stieltjes(&p, z).unwrap();
            let expect = ((z + 1.0) / z).ln();
            assert!((v - expect).norm() < 1e-12, "{z}: {v} vs {expect}");
        }
    }

    #[test]
    fn closed_forms_agree_with_tracking() {
        let presets = [
            Preset::planch(qf(3, 10)).unwrap(),
            Preset::multi_alpha(qi(1), qf(1, 4)).unwrap(),
            Preset::multi_alpha(qi(1), qi(2)).unwrap(),
            Preset::multi_beta(qf(1, 2), qi(1)).unwrap(),
            Preset::multi_beta(qf(1, 3), qf(5, 2)).unwrap(),
        ];
        for p in &presets {
            let s = CriticalSolver::new(&p.limit_params());
            for z in [Complex64::new(0.3, 0.4), Complex64::new(-0.6, 0.05), Complex64::new(6.0, 1.0)] {
                let a = preset_stieltjes(p, z).unwrap();
                let b = stieltjes_by_tracking(&s, z).unwrap();
                assert!((a - b).norm() < 1e-10, "{}: {z}: {a} vs {b}", p.name());
            }
        }
    }

    #[test]
    fn stieltjes_has_negative_imaginary_part() {
        for p in [Preset::planch(qi(2)).unwrap(), Preset::Continuous] {
            let v = preset_stieltjes(&p, Complex64::new(0.5, 0.3)).unwrap();
            assert!(v.im < 0.0);
        }
    }
}
