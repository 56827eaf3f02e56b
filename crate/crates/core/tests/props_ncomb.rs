//! Property tests for noncrossing-partition weight sums.

mod common;

use common::t_vector;
use gtls_core::limitshape::c_coefficient;
use gtls_core::ncomb::weight_sum;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn weight_sum_is_the_c_coefficient(t in t_vector(8)) {
        for k in 1..=8 {
            prop_assert_eq!(weight_sum(k, &t).unwrap(), c_coefficient(&t, k).unwrap(), "k={}", k);
        }
    }
}
