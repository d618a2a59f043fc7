//! Named series against independent constructions.

use num_bigint::BigInt;
use theta_core::forms::{self, FormName, NamedSeries};
use theta_core::number_theory::{partition_numbers, r4_bruteforce};
use theta_core::{QSeries, Rational};

fn int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

#[test]
fn theta4_counts_representations_from_zero() {
    let t4 = forms::theta4(2000);
    for n in 0..=2000usize {
        assert_eq!(t4.coeff(n), &int(r4_bruteforce(n as u64).unwrap()), "n = {n}");
    }
}

#[test]
fn partitions_match_expanded_product() {
    let order = 120;
    // prod_{k<=order} 1/(1-q^k), each factor inverted in the series ring.
    let mut product = QSeries::one(order);
    for k in 1..=order {
        let mut c = vec![Rational::from_integer(0.into()); order + 1];
        c[0] = Rational::from_integer(1.into());
        c[k] = Rational::from_integer((-1).into());
        let factor = QSeries::from_coeffs(c).unwrap().inverse().unwrap();
        product = product.mul(&factor);
    }
    let p = partition_numbers(order);
    for n in 0..=order {
        assert_eq!(product.coeff(n), &int(p[n].clone()), "p({n})");
    }
}

#[test]
fn verify_checks_are_deterministic_and_idempotent() {
    type Check = fn(usize) -> theta_core::Result<theta_core::CheckReport>;
    let checks: [Check; 7] = [
        forms::verify_jacobi,
        forms::verify_lagrange,
        forms::verify_full_jacobi,
        forms::verify_ramanujan_ode,
        forms::verify_psi_triple,
        forms::verify_sigma_lambert,
        forms::verify_final_proportionality,
    ];
    for check in checks {
        let first = check(120).unwrap();
        let second = check(120).unwrap();
        assert!(first.pass, "{first}");
        assert_eq!(first, second);
    }
}

#[test]
fn proportionality_constant_is_minus_one_third() {
    let r = forms::verify_final_proportionality(300).unwrap();
    assert!(r.pass);
    assert_eq!(r.note.as_deref(), Some("constant = -1/3"));
}

#[test]
fn every_named_series_builds() {
    for name in FormName::ALL {
        let s = NamedSeries::build(name, 60).unwrap();
        assert_eq!(s.order(), 60);
        assert_eq!(name.as_str().parse::<FormName>().unwrap(), name);
    }
}
