//! Property tests for the exact finite-N measure.

mod common;

use common::{positive, rational, unit_open};
use gtls_core::finiten::{captured_mass, measure_table_complete, mu_lambda, p_k_eval, Signature};
use gtls_core::fps::{qf, qi};
use gtls_core::{OmegaParams, Param, Q};
use proptest::collection::vec;
use proptest::prelude::*;

/// Plus-only parameters with a few alphas and betas.
fn plus_only() -> impl Strategy<Value = OmegaParams> {
    (
        vec((positive(2, 4), 1u64..=2), 0..=2),
        vec((unit_open(5), 1u64..=2), 0..=2),
        rational(0..=6, 2),
    )
        .prop_map(|(a, b, g)| {
            let ps = |v: Vec<(Q, u64)>| v.into_iter().map(|(x, m)| Param::new(x, m)).collect();
            OmegaParams::new(ps(a), vec![], ps(b), vec![], g, qi(0)).unwrap()
        })
}

fn signature() -> impl Strategy<Value = Signature> {
    vec(-10i64..=10, 1..=6).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Signature::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weights_are_nonnegative(p in plus_only(), n in 1usize..=4, cutoff in 0i64..=20) {
        let table = measure_table_complete(&p, n, cutoff).unwrap();
        for e in &table.entries {
            prop_assert!(e.prob >= 0.0);
            prop_assert!(e.weight.as_ref().is_some_and(|w| *w >= Q::from_integer(0.into())), "{}", e.sig);
        }
        prop_assert!(table.captured_mass <= 1.0 + 1e-12);
    }

    #[test]
    fn captured_mass_grows_with_cutoff(p in plus_only(), n in 1usize..=3, c1 in 0i64..=12, extra in 1i64..=6) {
        let m1 = captured_mass(&p, n, c1).unwrap();
        let m2 = captured_mass(&p, n, c1 + extra).unwrap();
        prop_assert!(m1 <= m2 + 1e-12, "{} then {}", m1, m2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The k-th moment of `mu_lambda` is `p_k/N^{k+1}` plus the moment of the empty signature.
    #[test]
    fn atomic_measure_moments(sig in signature(), k in 1u32..=6) {
        let n = sig.n() as i64;
        let nk = num_traits::pow(qi(n), k as usize);
        let base: Q = (1..=n).map(|i| num_traits::pow(qf(1 - 2 * i, 2), k as usize)).sum::<Q>() / (qi(n) * &nk);
        let expected = p_k_eval(&sig, k).unwrap() / (&nk * qi(n)) + base;
        prop_assert_eq!(mu_lambda(&sig).moment(k), expected);
    }
}
