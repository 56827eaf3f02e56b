//! Property tests for limit parameter data and its `P'` series.

mod common;

use common::{limit_params, positive, rational, unit_open};
use gtls_core::charparams::{convergence_gap, p_eval, p_prime_eval, p_prime_series};
use gtls_core::fps::q_to_f64;
use gtls_core::{Atom, LimitParams};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Sample points on the circle of radius `r`.
const SAMPLES: usize = 128;

fn circle(r: f64) -> impl Iterator<Item = (Complex64, Complex64)> {
    (0..SAMPLES).map(move |j| {
        let u = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / SAMPLES as f64);
        (r * u, u)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `t_j = j [z^j] P`, with the Taylor coefficients of `P` taken by the
    /// trapezoid rule on a circle well inside the disk of convergence.
    #[test]
    fn series_is_the_taylor_prefix_of_p(lim in limit_params(), order in 1usize..=10) {
        let t = p_prime_series(&lim, order).unwrap();
        let r = 0.5 * q_to_f64(&lim.radius_hint());
        let vals: Vec<_> = circle(r).map(|(z, u)| (p_eval(&lim, z).unwrap(), u)).collect();
        let scale = vals.iter().map(|(p, _)| p.norm()).fold(1.0, f64::max);
        for j in 1..=order {
            let c: Complex64 = vals.iter().map(|(p, u)| p * u.powi(-(j as i32))).sum::<Complex64>()
                / (SAMPLES as f64 * r.powi(j as i32));
            let exact = q_to_f64(t.t(j));
            let tol = 1e-9 * (j as f64) * scale / r.powi(j as i32);
            prop_assert!((j as f64 * c.re - exact).abs() <= tol, "j={} quad={} exact={}", j, j as f64 * c.re, exact);
            prop_assert!(c.im.abs() * j as f64 <= tol);
        }
    }

    /// Cauchy estimate on the circle of radius `radius_hint/2`: the
    /// coefficients are majorized by a geometric progression.
    #[test]
    fn coefficients_are_geometrically_bounded(lim in limit_params()) {
        let t = p_prime_series(&lim, 12).unwrap();
        let r = 0.5 * q_to_f64(&lim.radius_hint());
        let max = circle(r).map(|(z, _)| p_prime_eval(&lim, z).unwrap().norm()).fold(0.0, f64::max);
        for k in 1..=12 {
            let bound = max / r.powi(k as i32 - 1);
            prop_assert!(q_to_f64(t.t(k)).abs() <= bound * (1.0 + 1e-9), "k={} t={} bound={}", k, t.t(k), bound);
        }
    }

    /// With one atom the rounding error of `floor(wN)/N` only shrinks from
    /// `N` to `4N`; the gamma terms are exact at every `N`.
    #[test]
    fn scaling_sequence_converges(
        gp in rational(0..=6, 3),
        gm in rational(0..=3, 3),
        kind in 0usize..4,
        xa in positive(2, 4),
        xb in unit_open(5),
        w in positive(2, 7),
        n in 1u64..=6,
    ) {
        let atom = |x| vec![Atom::new(x, w.clone())];
        let (mut ap, mut am, mut bp, mut bm) = (vec![], vec![], vec![], vec![]);
        match kind {
            0 => ap = atom(xa),
            1 => am = atom(xa),
            2 => bp = atom(xb),
            _ => bm = atom(xb),
        }
        let lim = LimitParams::new(gp, gm, ap, am, bp, bm).unwrap();
        let g1 = q_to_f64(&convergence_gap(&lim, n, 8).unwrap());
        let g4 = q_to_f64(&convergence_gap(&lim, 4 * n, 8).unwrap());
        prop_assert!(g4 <= g1 + 1e-12, "gap({})={} gap({})={}", n, g1, 4 * n, g4);
    }
}
