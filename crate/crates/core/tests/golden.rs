//! Stored expansions to order 100, compared with the library and with
//! independent oracles.

use std::path::Path;

use num_bigint::BigInt;
use theta_core::forms::{FormName, NamedSeries};
use theta_core::number_theory::{r4_bruteforce, sigma, sigma3};
use theta_core::{QSeries, Rational};

const ORDER: usize = 100;

fn load(name: &str) -> QSeries {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.golden"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    QSeries::from_golden(&text).unwrap()
}

fn int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

#[test]
fn golden_files_match_library() {
    for name in [FormName::Theta4, FormName::L, FormName::M, FormName::Psi, FormName::Phi] {
        let stored = load(name.as_str());
        assert_eq!(stored.order(), ORDER);
        assert_eq!(stored, NamedSeries::build(name, ORDER).unwrap().series, "{name}");
    }
}

#[test]
fn golden_files_match_oracles() {
    let t4 = load("theta4");
    let l = load("L");
    let m = load("M");
    for n in 1..=ORDER {
        assert_eq!(t4.coeff(n), &int(r4_bruteforce(n as u64).unwrap()));
        assert_eq!(l.coeff(n), &int(sigma(n as i64).unwrap() * -24));
        assert_eq!(m.coeff(n), &int(sigma3(n as i64).unwrap() * 240));
    }
    let psi = load("psi");
    for (n, b) in [1, 2, 5, 10, 20, 36, 65].into_iter().enumerate() {
        assert_eq!(psi.coeff(n), &int(BigInt::from(b)));
    }
    let phi = load("phi");
    assert_eq!(phi.coeff(1), &Rational::new(10.into(), 7.into()));
    assert_eq!(phi.coeff(5), &Rational::new(7419742.into(), 267995.into()));
}
