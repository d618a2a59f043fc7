//! Floating-point evaluation of theta, L, M, G4, g and h on the upper half
//! plane, and numerical checks of their transformation laws.
//!
//! Every q-series is truncated adaptively: a coefficient bound `B(n)` with
//! concave `log B` gives a geometric tail estimate, and summation stops once
//! that estimate drops below [`SERIES_EPS`]. Lattice and row sums use explicit
//! tail bounds to derive their tolerances.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modular::{mobius_complex, Mat2Z, UHPoint};
use crate::report::CheckReport;
use crate::series::QSeries;

/// Absolute tail target for adaptive q-series truncation.
pub const SERIES_EPS: f64 = 1e-18;

/// Hard cap on the number of q-series terms for one evaluation.
pub const MAX_SERIES_TERMS: usize = 200_000;

/// Smallest imaginary part at which the L-based checks evaluate a q-series directly.
pub const MIN_SERIES_IM: f64 = 0.02;

/// Smallest imaginary part at which the ODE checks evaluate g and h.
pub const MIN_ODE_IM: f64 = 0.1;

pub const TOL_POISSON: f64 = 1e-13;
pub const TOL_THETA_TRANSFORM: f64 = 1e-10;
pub const TOL_G4_LATTICE: f64 = 1e-5;
pub const TOL_G4_TRANSFORM: f64 = 1e-10;
pub const TOL_QUASIMODULAR: f64 = 1e-8;
pub const TOL_XI: f64 = 1e-8;
pub const TOL_G_PROPERTIES: f64 = 1e-8;
pub const TOL_ODE_TERMWISE: f64 = 1e-9;
/// Agreement between the termwise and the central-difference second derivative.
pub const TOL_ODE_FD_AGREEMENT: f64 = 1e-6;
pub const TOL_WEIGHT1_FD: f64 = 1e-5;
/// Rounding floor added to tail-derived tolerances of the row sums.
pub const ROW_SUM_ROUNDING: f64 = 1e-12;

/// Step of the central difference that cross-checks the termwise derivative.
pub const ODE_FD_STEP: f64 = 1e-4;
/// Step of the central difference used on transformed solutions.
pub const WEIGHT1_FD_STEP: f64 = 1e-3;

pub const CUSP_PERIOD_DEFECT_BOUND: f64 = 1e-8;
pub const CUSP_MODULUS_BOUND: f64 = 1e3;
/// The single-term control must show a period defect at least this large.
pub const CUSP_NEGATIVE_CONTROL_FLOOR: f64 = 1e-3;

/// Numerical settings shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    /// Minimum number of q-series terms; more are used when the tail demands.
    pub series_order: usize,
    /// Cutoff `R` of the G4 lattice sum over `0 < max(|c|,|d|) <= R`.
    pub lattice_radius: usize,
    /// Cutoff `D` of the row sums over `|d| <= D`.
    pub row_cutoff: usize,
    /// Overrides every check's own tolerance when set.
    pub tol: Option<f64>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series_order: 200,
            lattice_radius: 3000,
            row_cutoff: 200_000,
            tol: None,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.series_order == 0 || self.lattice_radius == 0 || self.row_cutoff == 0 {
            return Err(Error::Precondition(
                "series_order, lattice_radius and row_cutoff must be positive".into(),
            ));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Precondition(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `q = e^{2πiτ}`
pub fn nome(tau: Complex64) -> Complex64 {
    (2.0 * PI * I * tau).exp()
}

fn require_im(tau: Complex64, floor: f64) -> Result<()> {
    if tau.im >= floor {
        Ok(())
    } else {
        Err(Error::ImaginaryFloor { im: tau.im, floor })
    }
}

/// Smallest `n >= min_terms` such that `sum_{m>n} B(m) |q|^m < eps`, where
/// `log_bound(m) = log B(m)` is concave. Past the returned `n` the ratio
/// `B(m+1)|q|/B(m)` stays below `rho = (1+|q|)/2`, so the tail is dominated
/// by a geometric series.
fn truncation_point(
    abs_q: f64,
    log_bound: impl Fn(f64) -> f64,
    eps: f64,
    min_terms: usize,
) -> Result<usize> {
    if abs_q == 0.0 {
        return Ok(min_terms.max(1));
    }
    let lq = abs_q.ln();
    let rho = 0.5 * (1.0 + abs_q);
    let tail_factor = -(1.0 - rho).ln();
    let target = eps.ln();
    for n in min_terms.max(1)..MAX_SERIES_TERMS {
        let x = n as f64;
        let next = log_bound(x + 1.0);
        let ratio_ok = next - log_bound(x) + lq <= rho.ln();
        if ratio_ok && next + (x + 1.0) * lq + tail_factor < target {
            return Ok(n);
        }
    }
    Err(Error::StepBound {
        what: "q-series truncation",
        bound: MAX_SERIES_TERMS,
    })
}

/// `log(24 n (1 + ln n))`, bounding `24 sigma(n)`.
fn log_bound_l(x: f64) -> f64 {
    24f64.ln() + x.ln() + (1.0 + x.ln()).ln()
}

/// `log(240 * 1.21 n^3)`, bounding `240 sigma_3(n)` since `zeta(3) < 1.21`.
fn log_bound_m(x: f64) -> f64 {
    (240.0 * 1.21f64).ln() + 3.0 * x.ln()
}

/// `log((n+1) e^{π sqrt(4n/3)})`, bounding the coefficients of `psi = P^2`
/// (from `p(n) < e^{π sqrt(2n/3)}`) and of `phi` (since `a_n <= b_n`).
fn log_bound_psi(x: f64) -> f64 {
    (x + 1.0).ln() + PI * (4.0 * x / 3.0).sqrt()
}

/// `[0, f(1), ..., f(n)]` as `f64`, where `f(m) = sum_{d|m} d^power`.
pub fn divisor_sums_f64(n: usize, power: i32) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    for d in 1..=n {
        let p = (d as f64).powi(power);
        for m in (d..=n).step_by(d) {
            table[m] += p;
        }
    }
    table
}

/// `c_0 = 1, c_n = w(n) sum_{k=1}^n f(k) c_{n-k}` in floating point.
fn recursion_f64(n: usize, table: &[f64], weight: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(n + 1);
    c.push(1.0);
    for m in 1..=n {
        let acc: f64 = (1..=m).map(|k| table[k] * c[m - k]).sum();
        c.push(acc * weight(m as f64));
    }
    c
}

/// Coefficients of `L` as `f64`.
pub fn l_coeffs_f64(n: usize) -> Vec<f64> {
    let mut c: Vec<f64> = divisor_sums_f64(n, 1).into_iter().map(|s| -24.0 * s).collect();
    c[0] = 1.0;
    c
}

/// Coefficients of `M` as `f64`.
pub fn m_coeffs_f64(n: usize) -> Vec<f64> {
    let mut c: Vec<f64> = divisor_sums_f64(n, 3).into_iter().map(|s| 240.0 * s).collect();
    c[0] = 1.0;
    c
}

/// `b_n` from `b_n = (2/n) sum sigma(k) b_{n-k}`.
pub fn psi_coeffs_f64(n: usize) -> Vec<f64> {
    recursion_f64(n, &divisor_sums_f64(n, 1), |m| 2.0 / m)
}

/// `a_n` from `a_n = 10/(n(6n+1)) sum sigma_3(k) a_{n-k}`.
pub fn phi_coeffs_f64(n: usize) -> Vec<f64> {
    recursion_f64(n, &divisor_sums_f64(n, 3), |m| 10.0 / (m * (6.0 * m + 1.0)))
}

/// Horner evaluation of `sum c_n q^n`.
pub fn eval_coeffs(coeffs: &[f64], q: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * q + c)
}

/// Evaluates an exact series at `q` (coefficients rounded to `f64`).
pub fn eval_qseries(s: &QSeries, q: Complex64) -> Complex64 {
    eval_coeffs(&s.to_f64_coeffs(), q)
}

fn adaptive_eval(
    tau: Complex64,
    cfg: &EvalConfig,
    log_bound: fn(f64) -> f64,
    coeffs: fn(usize) -> Vec<f64>,
) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::Precondition(format!("Im(tau) = {} is not positive", tau.im)));
    }
    let q = nome(tau);
    let n = truncation_point(q.norm(), log_bound, SERIES_EPS, cfg.series_order)?;
    Ok(eval_coeffs(&coeffs(n), q))
}

/// `theta(τ) = sum_{n in Z} q^{n^2}`, truncated at the first `N` with
/// `2|q|^{(N+1)^2} / (1 - |q|) < SERIES_EPS`.
pub fn theta_eval(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::Precondition(format!("Im(tau) = {} is not positive", tau.im)));
    }
    let abs_q = (-2.0 * PI * tau.im).exp();
    let lq = abs_q.ln();
    let tail = |n: f64| 2f64.ln() + (n + 1.0) * (n + 1.0) * lq - (1.0 - abs_q).ln();
    let mut n_max = 0usize;
    while tail(n_max as f64) >= SERIES_EPS.ln() {
        n_max += 1;
        if n_max > MAX_SERIES_TERMS {
            return Err(Error::StepBound {
                what: "theta truncation",
                bound: MAX_SERIES_TERMS,
            });
        }
    }
    // Smallest terms first.
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..=n_max).rev() {
        let k = (n * n) as f64;
        sum += 2.0 * (2.0 * PI * I * tau * k).exp();
    }
    Ok(sum + 1.0)
}

pub fn l_eval(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    adaptive_eval(tau, cfg, log_bound_l, l_coeffs_f64)
}

pub fn m_eval(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    adaptive_eval(tau, cfg, log_bound_m, m_coeffs_f64)
}

/// `G4(τ) = (π^4/45) M(q)`.
pub fn g4_series(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    Ok(m_eval(tau, cfg)? * PI.powi(4) / 45.0)
}

/// Reduces `tau` into `{|Re| <= 1/2, |τ| >= 1}` and returns the reduced point
/// with `B` such that `B τ` is that point.
pub fn reduce_sl2z(tau: Complex64) -> Result<(Complex64, Mat2Z)> {
    let mut z = tau;
    let mut acc = Mat2Z::identity();
    for _ in 0..crate::modular::REDUCE_STEP_BOUND {
        let shift = (z.re + 0.5).floor();
        if shift != 0.0 {
            let t = Mat2Z::t_pow(-(shift as i64));
            z = mobius_complex(&t, z);
            acc = t.mul(&acc);
        }
        if z.norm_sqr() < 1.0 - 1e-14 {
            z = -1.0 / z;
            acc = Mat2Z::s().mul(&acc);
        } else {
            return Ok((z, acc));
        }
    }
    Err(Error::StepBound {
        what: "reduce_sl2z",
        bound: crate::modular::REDUCE_STEP_BOUND,
    })
}

/// `L` at any point of the upper half plane: reduce to the standard
/// fundamental domain, evaluate the series there, and transport the value back
/// with the quasimodular law.
pub fn l_eval_anywhere(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::Precondition(format!("Im(tau) = {} is not positive", tau.im)));
    }
    let (z0, b) = reduce_sl2z(tau)?;
    let back = b.inv();
    let [_, _, c, d] = back.to_f64();
    let j = c * z0 + d;
    Ok(j * j * l_eval(z0, cfg)? + 6.0 / (PI * I) * c * j)
}

/// `y = e^{2πisτ} sum c_n (2πi(n+s))^k q^n`: the `k`-th derivative of
/// `e^{2πisτ} sum c_n q^n`, differentiated term by term.
fn eval_shifted_derivative(
    tau: Complex64,
    cfg: &EvalConfig,
    shift: f64,
    k: i32,
    log_bound: fn(f64) -> f64,
    coeffs: fn(usize) -> Vec<f64>,
) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::Precondition(format!("Im(tau) = {} is not positive", tau.im)));
    }
    let q = nome(tau);
    let bound = move |x: f64| log_bound(x) + k as f64 * (2.0 * PI * (x + 1.0)).ln();
    let n = truncation_point(q.norm(), bound, SERIES_EPS, cfg.series_order)?;
    let weighted: Vec<Complex64> = coeffs(n)
        .into_iter()
        .enumerate()
        .map(|(m, c)| c * (2.0 * PI * I * (m as f64 + shift)).powi(k))
        .collect();
    let sum = weighted
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * q + c);
    Ok((2.0 * PI * I * shift * tau).exp() * sum)
}

/// Which basis solution of the linear ODE to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeSolution {
    /// `g(τ) = e^{-πiτ/6} psi(q)`
    G,
    /// `h(τ) = e^{πiτ/6} phi(q)`
    H,
}

/// Exponent shift, log coefficient bound and coefficient table of a solution.
type SolutionParts = (f64, fn(f64) -> f64, fn(usize) -> Vec<f64>);

impl OdeSolution {
    fn parts(self) -> SolutionParts {
        match self {
            OdeSolution::G => (-1.0 / 12.0, log_bound_psi, psi_coeffs_f64),
            OdeSolution::H => (1.0 / 12.0, log_bound_psi, phi_coeffs_f64),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OdeSolution::G => "g",
            OdeSolution::H => "h",
        }
    }

    /// `k`-th derivative at `tau` (`k = 0` is the value).
    pub fn derivative(self, tau: Complex64, k: i32, cfg: &EvalConfig) -> Result<Complex64> {
        let (shift, bound, coeffs) = self.parts();
        eval_shifted_derivative(tau, cfg, shift, k, bound, coeffs)
    }

    pub fn eval(self, tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
        self.derivative(tau, 0, cfg)
    }
}

pub fn g_eval(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    OdeSolution::G.eval(tau, cfg)
}

pub fn h_eval(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    OdeSolution::H.eval(tau, cfg)
}

fn rel_err(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / rhs.norm()
}

/// Poisson summation for the Gaussian:
/// `sum e^{-2πtn^2} = (2t)^{-1/2} sum e^{-(π/2t)n^2}`.
pub fn check_poisson(t: f64) -> Result<CheckReport> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Precondition(format!("check_poisson needs t > 0, got {t}")));
    }
    let gauss_sum = |a: f64| {
        // sum_{n in Z} e^{-a n^2}, smallest terms first.
        let mut n_max = 0usize;
        while a * ((n_max + 1) * (n_max + 1)) as f64 <= 50.0 {
            n_max += 1;
        }
        let tail: f64 = (1..=n_max).rev().map(|n| (-a * (n * n) as f64).exp()).sum();
        1.0 + 2.0 * tail
    };
    let lhs = gauss_sum(2.0 * PI * t);
    let rhs = gauss_sum(PI / (2.0 * t)) / (2.0 * t).sqrt();
    Ok(CheckReport::numeric("poisson", ((lhs - rhs) / rhs).abs(), TOL_POISSON)
        .with_metric("t", t)
        .with_metric("lhs", lhs))
}

/// `theta(-1/4τ)^4 = -4τ^2 theta(τ)^4`, as a relative error.
pub fn check_theta_transform(tau: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    let z = tau.to_complex();
    let lhs = theta_eval(-1.0 / (4.0 * z))?.powi(4);
    let rhs = -4.0 * z * z * theta_eval(z)?.powi(4);
    Ok(CheckReport::numeric("theta-transform", rel_err(lhs, rhs), cfg.tol_or(TOL_THETA_TRANSFORM))
        .at_tau(tau.re(), tau.im()))
}

/// `sum_{|d|>D} 1/|τ+d|^p <= 2 / ((p-1)(D - |Re τ|)^{p-1})`.
fn row_tail_bound(tau: Complex64, cutoff: usize, p: i32) -> f64 {
    let gap = cutoff as f64 - tau.re.abs();
    2.0 / ((p - 1) as f64 * gap.powi(p - 1))
}

/// Symmetric partial sum `sum_{|d|<=D} (τ+d)^{-p}`, smallest terms first.
fn row_sum(tau: Complex64, cutoff: usize, p: i32) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for d in (1..=cutoff).rev() {
        let d = d as f64;
        sum += (tau + d).powi(-p) + (tau - d).powi(-p);
    }
    sum + tau.powi(-p)
}

fn check_row_sum(
    identity: &str,
    tau: UHPoint,
    cfg: &EvalConfig,
    p: i32,
    prefactor: f64,
    m_power: i32,
) -> Result<CheckReport> {
    let z = tau.to_complex();
    if (cfg.row_cutoff as f64) <= z.re.abs() + 1.0 {
        return Err(Error::Precondition("row cutoff must exceed |Re tau| + 1".into()));
    }
    let lhs = row_sum(z, cfg.row_cutoff, p);
    let q = nome(z);
    let bound = move |x: f64| m_power as f64 * x.ln();
    let n = truncation_point(q.norm(), bound, SERIES_EPS, 1)?;
    let coeffs: Vec<f64> = (0..=n).map(|m| (m as f64).powi(m_power)).collect();
    let rhs = prefactor * eval_coeffs(&coeffs, q);
    let tail = row_tail_bound(z, cfg.row_cutoff, p);
    let tol = cfg.tol_or(2.0 * tail + ROW_SUM_ROUNDING);
    Ok(CheckReport::numeric(identity, (lhs - rhs).norm(), tol)
        .at_tau(tau.re(), tau.im())
        .with_metric("cutoff", cfg.row_cutoff as f64)
        .with_metric("tail_bound", tail)
        .with_metric("rhs_re", rhs.re)
        .with_metric("rhs_im", rhs.im))
}

/// `sum_d 1/(τ+d)^2 = -4π^2 sum m q^m`; absolute error, `O(1/D)` tail.
pub fn check_row_sum2(tau: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    check_row_sum("row-sum2", tau, cfg, 2, -4.0 * PI * PI, 1)
}

/// `sum_d 1/(τ+d)^4 = (8π^4/3) sum m^3 q^m`; absolute error, `O(1/D^3)` tail.
pub fn check_row_sum4(tau: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    check_row_sum("row-sum4", tau, cfg, 4, 8.0 * PI.powi(4) / 3.0, 3)
}

/// `sum_{0 < max(|c|,|d|) <= R} (cτ+d)^{-4}`, summed shell by shell.
pub fn g4_lattice(tau: UHPoint, cfg: &EvalConfig) -> Complex64 {
    let z = tau.to_complex();
    let term = |c: f64, d: f64| {
        let w = c * z + d;
        let w2 = w * w;
        (w2 * w2).inv()
    };
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=cfg.lattice_radius as i64 {
        let kf = k as f64;
        // Half of the shell; (c, d) and (-c, -d) contribute equally.
        let mut shell = Complex64::new(0.0, 0.0);
        for d in -k..=k {
            shell += term(kf, d as f64);
        }
        for c in (-k + 1)..k {
            shell += term(c as f64, kf);
        }
        total += 2.0 * shell;
    }
    total
}

/// Smallest `|xτ + y|` over the boundary of the square `max(|x|,|y|) = 1`.
fn unit_shell_distance(z: Complex64) -> f64 {
    // Edges x = ±1: minimize |τ + y| over y in [-1, 1].
    let y = (-z.re).clamp(-1.0, 1.0);
    let edge_x = (z + y).norm();
    // Edges y = ±1: minimize |xτ + 1| over x in [-1, 1].
    let x = (-z.re / z.norm_sqr()).clamp(-1.0, 1.0);
    let edge_y = (x * z + 1.0).norm();
    edge_x.min(edge_y)
}

/// Bound on the dropped lattice terms: shell `k` has `8k` points each of
/// modulus at most `(k δ)^{-4}`, so the tail is below `4 / (δ^4 R^2)`.
pub fn g4_tail_bound(tau: UHPoint, radius: usize) -> f64 {
    let delta = unit_shell_distance(tau.to_complex());
    4.0 / (delta.powi(4) * (radius as f64).powi(2))
}

/// Lattice sum against `(π^4/45) M(q)`, as a relative error.
pub fn check_g4_expansion(tau: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    let lattice = g4_lattice(tau, cfg);
    let series = g4_series(tau.to_complex(), cfg)?;
    Ok(CheckReport::numeric("g4", rel_err(lattice, series), cfg.tol_or(TOL_G4_LATTICE))
        .at_tau(tau.re(), tau.im())
        .with_metric("radius", cfg.lattice_radius as f64)
        .with_metric("relative_tail_bound", g4_tail_bound(tau, cfg.lattice_radius) / series.norm())
        .with_metric("lattice_im", lattice.im))
}

/// Weight-4 law `G4(Aτ) = (cτ+d)^4 G4(τ)` through the M-series on both sides.
pub fn check_g4_transform(tau: UHPoint, a: &Mat2Z, cfg: &EvalConfig) -> Result<CheckReport> {
    let z = tau.to_complex();
    let az = mobius_complex(a, z);
    require_im(az, MIN_SERIES_IM)?;
    let j = a.automorphy_factor(z);
    let lhs = g4_series(az, cfg)?;
    let rhs = j.powi(4) * g4_series(z, cfg)?;
    Ok(CheckReport::numeric("g4-transform", rel_err(lhs, rhs), cfg.tol_or(TOL_G4_TRANSFORM))
        .at_tau(tau.re(), tau.im())
        .with_matrix(a))
}

/// `L(Aτ) - (cτ+d)^2 L(τ) - (6/πi) c (cτ+d)`, absolute.
pub fn check_l_quasimodular(tau: UHPoint, a: &Mat2Z, cfg: &EvalConfig) -> Result<CheckReport> {
    let z = tau.to_complex();
    require_im(z, MIN_SERIES_IM)?;
    let az = mobius_complex(a, z);
    require_im(az, MIN_SERIES_IM)?;
    let [_, _, c, _] = a.to_f64();
    let j = a.automorphy_factor(z);
    let lhs = l_eval(az, cfg)?;
    let rhs = j * j * l_eval(z, cfg)? + 6.0 / (PI * I) * c * j;
    Ok(CheckReport::numeric("quasimodular", (lhs - rhs).norm(), cfg.tol_or(TOL_QUASIMODULAR))
        .at_tau(tau.re(), tau.im())
        .with_matrix(a))
}

/// `L(τ) - L(τ + 1/2)`, the coefficient of the 1-form Xi.
pub fn xi_coefficient(tau: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    Ok(l_eval(tau, cfg)? - l_eval(tau + 0.5, cfg)?)
}

/// Gamma0(4)-invariance of `(L(τ) - L(τ+1/2)) dτ`: the pulled-back
/// coefficient `Xi(Aτ) (cτ+d)^{-2}` must equal `Xi(τ)`.
pub fn check_xi_invariance(tau: UHPoint, a: &Mat2Z, cfg: &EvalConfig) -> Result<CheckReport> {
    if !a.in_gamma0_4() {
        return Err(Error::Precondition(format!("{a} is not in Gamma0(4)")));
    }
    let z = tau.to_complex();
    require_im(z, MIN_SERIES_IM)?;
    let az = mobius_complex(a, z);
    require_im(az, MIN_SERIES_IM)?;
    let j = a.automorphy_factor(z);
    let lhs = xi_coefficient(az, cfg)? / (j * j);
    let rhs = xi_coefficient(z, cfg)?;
    Ok(CheckReport::numeric("xi", (lhs - rhs).norm(), cfg.tol_or(TOL_XI))
        .at_tau(tau.re(), tau.im())
        .with_matrix(a))
}

/// Properties of `g = e^{-πiτ/6} psi(q)`: no zeros on a sample grid,
/// `g(τ - 1) = e^{πi/6} g(τ)`, and `-τ g(-1/τ) / g(τ)` taking the same value
/// at `tau1` and `tau2`. Also records `h(i)`.
pub fn check_g_properties(tau1: UHPoint, tau2: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    let tol = cfg.tol_or(TOL_G_PROPERTIES);
    let mut min_modulus = f64::INFINITY;
    for xi in 0..4 {
        for yi in 1..=25 {
            let z = Complex64::new(0.25 * xi as f64, 0.2 * yi as f64);
            min_modulus = min_modulus.min(g_eval(z, cfg)?.norm());
        }
    }
    let h_at_i = h_eval(I, cfg)?;

    let rotation = (PI * I / 6.0).exp();
    let ratio = |tau: UHPoint| -> Result<(f64, Complex64)> {
        let z = tau.to_complex();
        let gz = g_eval(z, cfg)?;
        let shift_err = rel_err(g_eval(z - 1.0, cfg)?, rotation * gz);
        let beta = -z * g_eval(-1.0 / z, cfg)? / gz;
        Ok((shift_err, beta))
    };
    let (shift1, beta1) = ratio(tau1)?;
    let (shift2, beta2) = ratio(tau2)?;
    let constancy = rel_err(beta2, beta1);
    let error = shift1.max(shift2).max(constancy);

    let mut report = CheckReport::numeric("g-properties", error, tol)
        .at_tau(tau1.re(), tau1.im())
        .with_metric("min_abs_g_on_grid", min_modulus)
        .with_metric("abs_h_at_i", h_at_i.norm())
        .with_metric("shift_error", shift1.max(shift2))
        .with_metric("beta_constancy_error", constancy)
        .with_metric("beta_re", beta1.re)
        .with_metric("beta_im", beta1.im)
        .with_note(format!("second point {},{}", tau2.re(), tau2.im()));
    if !(min_modulus > 0.0) || !(h_at_i.norm() > 0.0) {
        report.pass = false;
    }
    Ok(report)
}

/// `y'' + (π^2/36) M y`, relative to `|(π^2/36) M y|`.
fn ode_residual(y: Complex64, y2: Complex64, m: Complex64) -> f64 {
    let potential = PI * PI / 36.0 * m * y;
    (y2 + potential).norm() / potential.norm()
}

fn central_second_difference(f: impl Fn(Complex64) -> Result<Complex64>, z: Complex64, h: f64) -> Result<Complex64> {
    Ok((f(z + h)? - 2.0 * f(z)? + f(z - h)?) / (h * h))
}

/// `g` and `h` solve `y'' + (π^2/36) M y = 0`, with the second derivative
/// taken term by term and cross-checked by a central difference.
pub fn check_ode_solution(tau: UHPoint, cfg: &EvalConfig) -> Result<CheckReport> {
    let z = tau.to_complex();
    require_im(z, MIN_ODE_IM)?;
    let m = m_eval(z, cfg)?;
    let mut residual: f64 = 0.0;
    let mut fd_gap: f64 = 0.0;
    let mut metrics = Vec::new();
    for sol in [OdeSolution::G, OdeSolution::H] {
        let y = sol.eval(z, cfg)?;
        let y2 = sol.derivative(z, 2, cfg)?;
        let fd = central_second_difference(|w| sol.eval(w, cfg), z, ODE_FD_STEP)?;
        let r = ode_residual(y, y2, m);
        let gap = rel_err(fd, y2);
        residual = residual.max(r);
        fd_gap = fd_gap.max(gap);
        metrics.push((format!("ode_{}", sol.name()), r));
        metrics.push((format!("fd_{}", sol.name()), gap));
    }
    let mut report = CheckReport::numeric("ode-solution", residual, cfg.tol_or(TOL_ODE_TERMWISE))
        .at_tau(tau.re(), tau.im());
    report.metrics.extend(metrics);
    if !(fd_gap < TOL_ODE_FD_AGREEMENT) {
        report.pass = false;
        report.note = Some(format!("finite difference disagrees by {fd_gap:.3e}"));
    }
    Ok(report)
}

/// `(cτ+d) g(Aτ)` still solves the ODE at `τ` (projective invariance),
/// with the second derivative taken by central differences.
pub fn check_weight1_invariance(tau: UHPoint, a: &Mat2Z, cfg: &EvalConfig) -> Result<CheckReport> {
    let z = tau.to_complex();
    let h = WEIGHT1_FD_STEP;
    for w in [z - h, z, z + h] {
        require_im(mobius_complex(a, w), MIN_ODE_IM)?;
    }
    let transformed = |w: Complex64| -> Result<Complex64> {
        Ok(a.automorphy_factor(w) * g_eval(mobius_complex(a, w), cfg)?)
    };
    let y = transformed(z)?;
    let y2 = central_second_difference(transformed, z, h)?;
    let m = m_eval(z, cfg)?;
    Ok(CheckReport::numeric("weight1", ode_residual(y, y2, m), cfg.tol_or(TOL_WEIGHT1_FD))
        .at_tau(tau.re(), tau.im())
        .with_matrix(a))
}

/// The Xi coefficient seen from the cusp `τ = 0` in the coordinate
/// `τ = -1/(4 σ)`: `(L(τ) - L(τ + 1/2)) / (4 σ^2)`.
pub fn xi_at_cusp(sigma: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let tau = -1.0 / (4.0 * sigma);
    Ok((l_eval_anywhere(tau, cfg)? - l_eval_anywhere(tau + 0.5, cfg)?) / (4.0 * sigma * sigma))
}

/// A single L-term in the same coordinate; not periodic.
pub fn single_l_term_at_cusp(sigma: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let tau = -1.0 / (4.0 * sigma);
    Ok(l_eval_anywhere(tau, cfg)? / (4.0 * sigma * sigma))
}

/// Sample points: the rectangle `0 <= x <= 1, 1 <= y <= 20` on a coarse grid
/// plus a dense row at `y = 1`.
pub fn cusp_sample_grid() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for xi in 0..=10 {
        for yi in 0..=38 {
            pts.push(Complex64::new(0.1 * xi as f64, 1.0 + 0.5 * yi as f64));
        }
    }
    for xi in 0..=200 {
        pts.push(Complex64::new(xi as f64 / 200.0, 1.0));
    }
    pts
}

/// Boundedness and periodicity of Xi near the cusp `τ = 0`, plus a negative
/// control showing that one L-term alone is not periodic there.
pub fn check_cusp_boundedness(cfg: &EvalConfig) -> Result<CheckReport> {
    let mut max_modulus: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    let mut control_defect: f64 = 0.0;
    for s in cusp_sample_grid() {
        let xi = xi_at_cusp(s, cfg)?;
        let xi_shifted = xi_at_cusp(s + 1.0, cfg)?;
        max_modulus = max_modulus.max(xi.norm());
        max_defect = max_defect.max((xi_shifted - xi).norm());
        let single = single_l_term_at_cusp(s, cfg)?;
        let single_shifted = single_l_term_at_cusp(s + 1.0, cfg)?;
        control_defect = control_defect.max((single_shifted - single).norm());
    }

    // Informational only: |Theta(1/2 + it)| / |Theta(it)| for shrinking t.
    let mut domination: f64 = 0.0;
    for t in [1.0, 0.5, 0.2, 0.1, 0.05] {
        let r = (theta_eval(Complex64::new(0.5, t))?.norm() / theta_eval(Complex64::new(0.0, t))?.norm()).powi(4);
        domination = domination.max(r);
    }

    let tol = cfg.tol_or(CUSP_PERIOD_DEFECT_BOUND);
    let mut report = CheckReport::numeric("cusp", max_defect, tol)
        .with_metric("max_modulus", max_modulus)
        .with_metric("max_period_defect", max_defect)
        .with_metric("single_term_period_defect", control_defect)
        .with_metric("theta_domination_ratio_max", domination);
    let bounded = max_modulus < CUSP_MODULUS_BOUND;
    let control_ok = control_defect > CUSP_NEGATIVE_CONTROL_FLOOR;
    if !bounded || !control_ok {
        report.pass = false;
        report.note = Some(format!(
            "bounded: {bounded}, negative control has power: {control_ok}"
        ));
    }
    Ok(report)
}
