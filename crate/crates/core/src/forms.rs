//! The named q-series (theta, theta^4, L, M, psi, phi, P) and the exact
//! coefficient identities that relate them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number_theory::{
    divisor_sum_table, jacobi_count, r4_bruteforce, DivisorSumKind,
};
use crate::report::{compare_series, first_mismatch, rational_witness, CheckReport, Witness};
use crate::series::{QSeries, Rational};

/// Order used by verifications when the caller does not pick one.
pub const DEFAULT_ORDER: usize = 500;

/// Above this index the full-Jacobi check stops cross-checking against enumeration.
pub const BRUTEFORCE_CROSSCHECK_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormName {
    Theta,
    Theta4,
    L,
    M,
    Psi,
    Phi,
    P,
}

impl FormName {
    pub const ALL: [FormName; 7] = [
        FormName::Theta,
        FormName::Theta4,
        FormName::L,
        FormName::M,
        FormName::Psi,
        FormName::Phi,
        FormName::P,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormName::Theta => "theta",
            FormName::Theta4 => "theta4",
            FormName::L => "L",
            FormName::M => "M",
            FormName::Psi => "psi",
            FormName::Phi => "phi",
            FormName::P => "P",
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown series name {s:?}")))
    }
}

/// A named series together with its construction.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedSeries {
    pub name: FormName,
    pub series: QSeries,
}

impl NamedSeries {
    pub fn build(name: FormName, order: usize) -> Result<Self> {
        let series = match name {
            FormName::Theta => theta(order),
            FormName::Theta4 => theta4(order),
            FormName::L => series_l(order),
            FormName::M => series_m(order),
            FormName::Psi => psi_by_recursion(order)?,
            FormName::Phi => phi_by_recursion(order),
            FormName::P => partition_series(order),
        };
        Ok(NamedSeries { name, series })
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `theta(q) = sum_{n in Z} q^{n^2} = 1 + 2q + 2q^4 + 2q^9 + ...`
pub fn theta(order: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    let mut n = 1usize;
    while n * n <= order {
        coeffs[n * n] = int(2);
        n += 1;
    }
    QSeries::from_coeffs(coeffs).expect("nonempty")
}

pub fn theta4(order: usize) -> QSeries {
    theta(order).pow(4)
}

/// `sum_{n>=1} f(n) q^n` for a divisor sum `f`.
pub fn divisor_sum_series(kind: DivisorSumKind, order: usize) -> QSeries {
    let table = divisor_sum_table(kind, order);
    QSeries::from_coeffs(table.into_iter().map(Rational::from_integer).collect()).expect("nonempty")
}

/// `L(q) = 1 - 24 sum sigma(n) q^n`
pub fn series_l(order: usize) -> QSeries {
    let s = divisor_sum_series(DivisorSumKind::Sigma1, order).scale(&int(-24));
    &QSeries::one(order) + &s
}

/// `M(q) = 1 + 240 sum sigma_3(n) q^n`
pub fn series_m(order: usize) -> QSeries {
    let s = divisor_sum_series(DivisorSumKind::Sigma3, order).scale(&int(240));
    &QSeries::one(order) + &s
}

/// `P(q) = prod_{k>=1} 1/(1-q^k)`, expanded factor by factor as geometric series.
pub fn partition_series(order: usize) -> QSeries {
    let mut acc = QSeries::one(order);
    for k in 1..=order {
        let geometric = QSeries::from_fn(order, |n| {
            if n % k == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        acc = acc.mul(&geometric);
    }
    acc
}

/// Solves `c_0 = 1, c_n = weight(n) * sum_{k=1}^n f(k) c_{n-k}` exactly.
fn convolution_recursion(
    order: usize,
    table: &[BigInt],
    weight: impl Fn(usize) -> Rational,
) -> QSeries {
    let mut c: Vec<Rational> = Vec::with_capacity(order + 1);
    c.push(Rational::one());
    for n in 1..=order {
        let mut acc = Rational::zero();
        for k in 1..=n {
            acc += &c[n - k] * &table[k];
        }
        c.push(acc * weight(n));
    }
    QSeries::from_coeffs(c).expect("nonempty")
}

fn require_integral(s: QSeries) -> Result<QSeries> {
    match s.first_non_integral() {
        Some(index) => Err(Error::NonIntegral {
            index,
            value: s.coeff(index).to_string(),
        }),
        None => Ok(s),
    }
}

/// `psi = sum b_n q^n` from `b_0 = 1, b_n = (2/n) sum_{k=1}^n sigma(k) b_{n-k}`.
///
/// Computed over the rationals; a non-integral coefficient is an error.
pub fn psi_by_recursion(order: usize) -> Result<QSeries> {
    let sigma = divisor_sum_table(DivisorSumKind::Sigma1, order);
    require_integral(convolution_recursion(order, &sigma, |n| {
        Rational::new(2.into(), n.into())
    }))
}

/// `b_n = 10 / (n(6n-1)) sum_{k=1}^n sigma_3(k) b_{n-k}`, the recursion coming
/// from the linear ODE. Agreement with [`psi_by_recursion`] is the formal
/// content of the Ramanujan ODE.
pub fn psi_by_sigma3_recursion(order: usize) -> QSeries {
    let sigma3 = divisor_sum_table(DivisorSumKind::Sigma3, order);
    convolution_recursion(order, &sigma3, |n| {
        Rational::new(10.into(), (n * (6 * n - 1)).into())
    })
}

/// `exp(2 sum_{n>=1} sigma(n)/n q^n)`
pub fn psi_by_exp(order: usize) -> QSeries {
    let sigma = divisor_sum_table(DivisorSumKind::Sigma1, order);
    let arg = QSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::zero()
        } else {
            Rational::new(BigInt::from(2) * &sigma[n], n.into())
        }
    });
    arg.exp0().expect("argument has zero constant term")
}

pub fn psi_by_partition_square(order: usize) -> QSeries {
    partition_series(order).pow(2)
}

/// `phi = sum a_n q^n` from `a_0 = 1, a_n = 10/(n(6n+1)) sum_{k=1}^n sigma_3(k) a_{n-k}`.
pub fn phi_by_recursion(order: usize) -> QSeries {
    let sigma3 = divisor_sum_table(DivisorSumKind::Sigma3, order);
    convolution_recursion(order, &sigma3, |n| {
        Rational::new(10.into(), (n * (6 * n + 1)).into())
    })
}

/// `sum_{n>=1} n q^n / (1 - q^n)`, each term expanded as a geometric series.
pub fn lambert_sigma_series(order: usize) -> QSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for n in 1..=order {
        for m in (n..=order).step_by(n) {
            coeffs[m] += n;
        }
    }
    QSeries::from_integers(coeffs).expect("nonempty")
}

fn require_order(order: usize, min: usize, what: &str) -> Result<()> {
    if order < min {
        Err(Error::Precondition(format!(
            "{what} needs order >= {min}, got {order}"
        )))
    } else {
        Ok(())
    }
}

/// `12 q dL/dq - L^2 + M`; zero exactly when the Ramanujan ODE holds.
pub fn ramanujan_ode_residual(l: &QSeries, m: &QSeries) -> QSeries {
    let lhs = l.qderiv().scale(&int(12));
    &(&lhs - &l.mul(l)) + m
}

/// Checks the residual of the Ramanujan ODE for given `L` and `M` series.
pub fn check_ramanujan_ode(l: &QSeries, m: &QSeries) -> CheckReport {
    let residual = ramanujan_ode_residual(l, m);
    compare_series("ramanujan-ode", &residual, &QSeries::zero(residual.order()))
}

pub fn verify_ramanujan_ode(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_ramanujan_ode")?;
    Ok(check_ramanujan_ode(&series_l(order), &series_m(order)))
}

/// `theta^4(q) - theta^4(-q) = 16 sum_{m>=0} sigma(2m+1) q^{2m+1}`.
pub fn verify_jacobi(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_jacobi")?;
    let t4 = theta4(order);
    let lhs = &t4 - &t4.substitute_neg();
    let sigma = divisor_sum_table(DivisorSumKind::Sigma1, order);
    let rhs = QSeries::from_fn(order, |n| {
        if n % 2 == 1 {
            Rational::from_integer(&sigma[n] * 16)
        } else {
            Rational::zero()
        }
    });
    Ok(compare_series("jacobi", &lhs, &rhs))
}

/// Every coefficient `n >= 1` of `theta^4` is strictly positive.
pub fn verify_lagrange(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_lagrange")?;
    let t4 = theta4(order);
    let witness = (1..=order)
        .find(|&n| !t4.coeff(n).is_positive())
        .map(|n| rational_witness(n, t4.coeff(n), &Rational::zero()));
    Ok(CheckReport::exact("lagrange", order, witness).with_note("witness right side is the bound 0"))
}

/// Coefficient `n` of `theta^4` equals `8 sum_{4 !| d | n} d`, and equals the
/// brute-force count for `n <= 2000`.
pub fn verify_full_jacobi(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_full_jacobi")?;
    let t4 = theta4(order);
    let mut witness: Option<Witness> = None;
    for n in 1..=order {
        let formula = int(jacobi_count(n as i64)?);
        if t4.coeff(n) != &formula {
            witness = Some(rational_witness(n, t4.coeff(n), &formula));
            break;
        }
        if n <= BRUTEFORCE_CROSSCHECK_LIMIT {
            let brute = int(r4_bruteforce(n as u64)?);
            if brute != formula {
                witness = Some(rational_witness(n, &brute, &formula));
                break;
            }
        }
    }
    Ok(CheckReport::exact("full-jacobi", order, witness))
}

/// `sum sigma(n) q^n = sum n q^n / (1 - q^n)`.
pub fn verify_sigma_lambert(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_sigma_lambert")?;
    Ok(compare_series(
        "lambert",
        &divisor_sum_series(DivisorSumKind::Sigma1, order),
        &lambert_sigma_series(order),
    ))
}

/// Finds `c` with `lhs = c * rhs`, taking `c` from the first index where
/// `rhs` is nonzero. Returns the constant and the first index that breaks it.
pub fn proportionality_constant(lhs: &QSeries, rhs: &QSeries) -> (Option<Rational>, Option<Witness>) {
    let order = lhs.order().min(rhs.order());
    let Some(lead) = (0..=order).find(|&n| !rhs.coeff(n).is_zero()) else {
        return (None, first_mismatch(lhs, &QSeries::zero(order)));
    };
    let c = lhs.coeff(lead) / rhs.coeff(lead);
    let scaled = rhs.scale(&c);
    (Some(c), first_mismatch(lhs, &scaled))
}

/// `theta^4(q) - theta^4(-q)` is a constant multiple of `L(q) - L(-q)`;
/// the constant is derived, then checked at every index.
pub fn verify_final_proportionality(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_final_proportionality")?;
    let t4 = theta4(order);
    let lhs = &t4 - &t4.substitute_neg();
    let l = series_l(order);
    let rhs = &l - &l.substitute_neg();
    let (c, witness) = proportionality_constant(&lhs, &rhs);
    let note = match &c {
        Some(c) => format!("constant = {c}"),
        None => "right side vanishes".to_string(),
    };
    Ok(CheckReport::exact("proportionality", order, witness).with_note(note))
}

/// Three psi constructions and the two b_n recursions agree, all b_n are
/// positive integers, and `0 < a_n <= b_n`.
pub fn verify_psi_triple(order: usize) -> Result<CheckReport> {
    require_order(order, 1, "verify_psi_triple")?;
    let by_recursion = match psi_by_recursion(order) {
        Ok(s) => s,
        Err(Error::NonIntegral { index, value }) => {
            let w = Witness {
                index,
                left: value,
                right: "an integer".into(),
            };
            return Ok(CheckReport::exact("psi-triple", order, Some(w)).with_note("b_n integrality"));
        }
        Err(e) => return Err(e),
    };
    let parts = [
        compare_series("psi recursion = exp", &by_recursion, &psi_by_exp(order)),
        compare_series("psi recursion = P^2", &by_recursion, &psi_by_partition_square(order)),
        compare_series("sigma recursion = sigma3 recursion", &by_recursion, &psi_by_sigma3_recursion(order)),
        positive_and_bounded(&phi_by_recursion(order), &by_recursion),
    ];
    Ok(CheckReport::all("psi-triple", &parts))
}

/// `0 < a_n <= b_n` for every index.
fn positive_and_bounded(a: &QSeries, b: &QSeries) -> CheckReport {
    let order = a.order().min(b.order());
    let witness = (0..=order)
        .find(|&n| !(a.coeff(n).is_positive() && a.coeff(n) <= b.coeff(n)))
        .map(|n| rational_witness(n, a.coeff(n), b.coeff(n)));
    CheckReport::exact("0 < a_n <= b_n", order, witness)
}
