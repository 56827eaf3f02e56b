//! Strategies shared by the property tests.

#![allow(dead_code)]

use gtls_core::fps::{qf, qi};
use gtls_core::{Atom, LimitParams, Series, TSeries, Q};
use proptest::collection::vec;
use proptest::prelude::*;

/// `n/d` with `n` in `num` and `d` in `1..=den`.
pub fn rational(num: std::ops::RangeInclusive<i64>, den: i64) -> impl Strategy<Value = Q> {
    (num, 1..=den).prop_map(|(n, d)| qf(n, d))
}

/// Strictly positive rational at most `hi`, with denominator at most `den`.
pub fn positive(hi: i64, den: i64) -> impl Strategy<Value = Q> {
    (1..=hi * den, Just(den)).prop_map(|(n, d)| qf(n, d))
}

/// Rational in the open unit interval.
pub fn unit_open(den: i64) -> impl Strategy<Value = Q> {
    (2..=den).prop_flat_map(|d| (1..d, Just(d))).prop_map(|(n, d)| qf(n, d))
}

/// `t_1..t_len` with small rational entries.
pub fn t_vector(len: usize) -> impl Strategy<Value = TSeries> {
    vec(rational(-9..=9, 9), len).prop_map(TSeries::from_t)
}

/// `z + a_2 z^2 + ... + a_order z^order`.
pub fn unit_series(order: usize) -> impl Strategy<Value = Series> {
    vec(rational(-5..=5, 6), order - 1).prop_map(|tail| {
        let mut c = vec![qi(0), qi(1)];
        c.extend(tail);
        Series::new(c)
    })
}

fn atoms(max: usize, loc: BoxedStrategy<Q>) -> impl Strategy<Value = Vec<Atom>> {
    vec((loc, positive(1, 4)).prop_map(|(x, w)| Atom::new(x, w)), 0..=max)
}

/// Atomic limit data with at most two atoms of each kind.
pub fn limit_params() -> impl Strategy<Value = LimitParams> {
    (
        rational(0..=6, 3),
        rational(0..=3, 3),
        atoms(2, positive(2, 4).boxed()),
        atoms(1, positive(2, 4).boxed()),
        atoms(2, unit_open(5).boxed()),
        atoms(1, unit_open(5).boxed()),
    )
        .prop_map(|(gp, gm, ap, am, bp, bm)| LimitParams::new(gp, gm, ap, am, bp, bm).unwrap())
}
