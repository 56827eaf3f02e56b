//! Property tests for quantized free convolution.

mod common;

use common::{positive, rational};
use gtls_core::fps::qi;
use gtls_core::limitshape::Preset;
use gtls_core::qfc::{convolve, moments_from_pprime, pprime_from_moments, pprime_from_rfunction, QfcMeasure};
use gtls_core::{LimitParams, Series};
use proptest::collection::vec;
use proptest::prelude::*;

fn check_homomorphism(a: &LimitParams, b: &LimitParams) -> Result<(), TestCaseError> {
    let conv = convolve(&QfcMeasure::from_limit(a, 10).unwrap(), &QfcMeasure::from_limit(b, 10).unwrap()).unwrap();
    let direct = QfcMeasure::from_limit(&a.combine(b).unwrap(), 10).unwrap();
    prop_assert_eq!(conv.moments(), direct.moments());
    prop_assert_eq!(conv.p_prime().ts(), direct.p_prime().ts());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn moments_roundtrip(m in vec(rational(-9..=9, 9), 12)) {
        let p = pprime_from_moments(&m, 12).unwrap();
        prop_assert_eq!(moments_from_pprime(&p, 12).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plancherel_convolution(g1 in positive(3, 6), g2 in positive(3, 6)) {
        check_homomorphism(&Preset::planch(g1).unwrap().limit_params(), &Preset::planch(g2).unwrap().limit_params())?;
    }

    #[test]
    fn multi_alpha_convolution(al1 in positive(2, 4), a1 in positive(1, 6), al2 in positive(2, 4), a2 in positive(1, 6)) {
        check_homomorphism(
            &Preset::multi_alpha(al1, a1).unwrap().limit_params(),
            &Preset::multi_alpha(al2, a2).unwrap().limit_params(),
        )?;
    }

    #[test]
    fn rfunction_bridge_is_affine(r1 in vec(rational(-6..=6, 5), 10), r2 in vec(rational(-6..=6, 5), 10)) {
        let (r1, r2) = (Series::new(r1), Series::new(r2));
        let f = |r: &Series| pprime_from_rfunction(r, 10).unwrap();
        let lhs = f(&r1.add(&r2)).add(&f(&Series::constant(qi(0), 9)));
        let rhs = f(&r1).add(&f(&r2));
        prop_assert_eq!(lhs.ts(), rhs.ts());
    }
}
