//! Algebraic laws of truncated q-series over exact rationals.

use num_bigint::BigInt;
use proptest::prelude::*;
use theta_core::{QSeries, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn series(order: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(rational(), order + 1).prop_map(|c| QSeries::from_coeffs(c).unwrap())
}

fn triple() -> impl Strategy<Value = (QSeries, QSeries, QSeries)> {
    (0usize..=8).prop_flat_map(|n| (series(n), series(n), series(n)))
}

/// Series with zero constant term, so `exp0` applies.
fn nilpotent(order: usize) -> impl Strategy<Value = QSeries> {
    series(order).prop_map(|s| {
        let mut c = s.into_coeffs();
        c[0] = Rational::from_integer(0.into());
        QSeries::from_coeffs(c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(a.mul(&QSeries::one(a.order())), a);
    }

    #[test]
    fn qderiv_is_a_derivation((a, b, _) in triple()) {
        let lhs = a.mul(&b).qderiv();
        let rhs = &a.qderiv().mul(&b) + &a.mul(&b.qderiv());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_neg_is_an_involutive_homomorphism((a, b, _) in triple()) {
        prop_assert_eq!(a.substitute_neg().substitute_neg(), a.clone());
        prop_assert_eq!(a.mul(&b).substitute_neg(), a.substitute_neg().mul(&b.substitute_neg()));
        prop_assert_eq!((&a + &b).substitute_neg(), &a.substitute_neg() + &b.substitute_neg());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_and_log_are_inverse(n in 0usize..=7, seed in nilpotent(7)) {
        let x = seed.truncate(n);
        let e = x.exp0().unwrap();
        prop_assert_eq!(e.log1().unwrap(), x.clone());
        // And the other way round, starting from 1 + x.
        let one_plus = &QSeries::one(n) + &x;
        prop_assert_eq!(one_plus.log1().unwrap().exp0().unwrap(), one_plus);
    }

    #[test]
    fn text_roundtrip_is_exact(a in (0usize..=10).prop_flat_map(series)) {
        let parsed: QSeries = a.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &a);
        prop_assert_eq!(QSeries::from_golden(&a.to_golden()).unwrap(), a);
    }

    #[test]
    fn inverse_is_two_sided(a in (0usize..=8).prop_flat_map(series)) {
        prop_assume!(a.coeff(0) != &Rational::from_integer(0.into()));
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), QSeries::one(a.order()));
    }
}
