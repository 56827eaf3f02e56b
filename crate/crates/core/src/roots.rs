//! All complex roots of a polynomial by Aberth-Ehrlich iteration.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Value and derivative by Horner; coefficients ascending.
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Drops exactly-zero leading coefficients.
pub fn trim(c: &[Complex64]) -> &[Complex64] {
    let mut n = c.len();
    while n > 1 && c[n - 1] == Complex64::new(0.0, 0.0) {
        n -= 1;
    }
    &c[..n]
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d].norm();
    // radius from the geometric mean of the roots, guarded for a zero root
    let r0 = (c[0].norm() / lead).powf(1.0 / d as f64);
    let cauchy = 1.0 + c[..d].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let r = if r0 > 0.0 && r0.is_finite() { r0.min(cauchy) } else { 1.0_f64.min(cauchy) };
    (0..d)
        .map(|j| Complex64::from_polar(r, 0.4 + std::f64::consts::TAU * j as f64 / d as f64))
        .collect()
}

/// Roots of `c[0] + c[1] z + ... + c[d] z^d`.
///
/// `init` warm-starts the iteration when its length matches the degree.
pub fn aberth(coeffs: &[Complex64], init: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
    let c = trim(coeffs);
    let d = c.len() - 1;
    if d == 0 {
        if c[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::NoRoot("zero polynomial".into()));
        }
        return Ok(vec![]);
    }
    if c.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NoRoot("non-finite polynomial coefficient".into()));
    }
    let mut z = match init {
        Some(v) if v.len() == d => v.to_vec(),
        _ => initial_guesses(c),
    };
    // separate coincident starting points
    for i in 0..d {
        for j in 0..i {
            if (z[i] - z[j]).norm() < 1e-14 * (1.0 + z[i].norm()) {
                let bump = Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm()) * (i as f64 + 1.0);
                z[i] += bump;
            }
        }
    }
    let mut settled = 0;
    for _ in 0..800 {
        let mut worst = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / (1.0 + z[i].norm()));
        }
        if worst < 1e-15 {
            settled += 1;
            if settled >= 2 {
                return Ok(z);
            }
        }
    }
    // multiple roots converge linearly; accept a loose but stable answer
    let resid = z.iter().map(|&r| eval_with_derivative(c, r).0.norm()).fold(0.0, f64::max);
    let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if resid <= 1e-8 * scale * (1.0 + z.iter().map(|r| r.norm()).fold(0.0, f64::max)).powi(d as i32) {
        Ok(z)
    } else {
        Err(Error::NoRoot(format!("Aberth iteration did not converge (residual {resid:e})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(r: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &x in r {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                q[i + 1] += a;
                q[i] -= a * x;
            }
            p = q;
        }
        p
    }

    fn matches(found: &[Complex64], expect: &[Complex64], tol: f64) -> bool {
        expect.iter().all(|e| found.iter().any(|f| (f - e).norm() < tol))
    }

    #[test]
    fn quadratic_roots() {
        // z^2 + 1
        let r = aberth(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], None).unwrap();
        assert!(matches(&r, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-14));
    }

    #[test]
    fn scattered_roots_of_degree_seven() {
        let roots = [c(1.0, 0.0), c(-2.0, 0.5), c(-2.0, -0.5), c(0.0, 3.0), c(0.1, 0.0), c(5.0, -1.0), c(-0.3, 0.2)];
        let p = poly_from_roots(&roots);
        let r = aberth(&p, None).unwrap();
        assert!(matches(&r, &roots, 1e-10));
    }

    #[test]
    fn leading_zeros_are_trimmed() {
        let r = aberth(&[c(-2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], None).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn double_root_is_accepted() {
        let p = poly_from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let r = aberth(&p, None).unwrap();
        assert!(matches(&r, &[c(1.0, 0.0), c(-1.0, 0.0)], 1e-6));
    }

    #[test]
    fn warm_start_is_used() {
        let roots = [c(2.0, 1.0), c(-1.0, 0.0), c(0.5, -0.5)];
        let p = poly_from_roots(&roots);
        let r = aberth(&p, Some(&[c(2.1, 1.0), c(-1.1, 0.0), c(0.5, -0.4)])).unwrap();
        for (a, b) in r.iter().zip(&roots) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
