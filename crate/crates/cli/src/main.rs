//! `theta4`: command-line front end for theta-core.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails,
//! and 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use theta_core::analytic::{self, EvalConfig};
use theta_core::forms::{self, FormName, NamedSeries};
use theta_core::modular::{self, Mat2Z, UHPoint};
use theta_core::number_theory;
use theta_core::{CheckReport, Error, Rational};

#[derive(Parser, Debug)]
#[command(name = "theta4", version, about = "Exact and numerical checks around Jacobi's four-squares theorem")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficients of a named q-series.
    Expand {
        name: FormName,
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Also write `<dir>/<name>.golden`.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// Exact coefficient checks of the named-series identities.
    Verify {
        #[arg(value_enum)]
        check: ExactCheck,
        #[arg(long, default_value_t = 200)]
        order: usize,
    },
    /// Floating-point checks of the transformation laws.
    VerifyAnalytic {
        #[arg(value_enum)]
        check: AnalyticCheck,
        /// Point of the upper half plane as `re,im` (poisson uses `t = im`).
        #[arg(long, default_value = "0.3,1.1", allow_hyphen_values = true)]
        tau: UHPoint,
        /// Second point for the g-constancy part of `ode-solution`.
        #[arg(long, default_value = "0,1.3", allow_hyphen_values = true)]
        tau2: UHPoint,
        /// Matrix as `[[a,b],[c,d]]`.
        #[arg(long)]
        matrix: Option<Mat2Z>,
        /// Minimum number of q-series terms.
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[arg(long, default_value_t = 3000)]
        radius: usize,
        #[arg(long, default_value_t = 200_000)]
        row_cutoff: usize,
        /// Replaces the check's own tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Four-square representation count three ways.
    R4 {
        #[arg(value_parser = clap::value_parser!(u64).range(1..=number_theory::R4_BRUTEFORCE_MAX))]
        n: u64,
    },
    /// Reduce a point into the fundamental domain of Gamma1(4).
    ReduceTau {
        #[arg(allow_hyphen_values = true)]
        tau: UHPoint,
    },
    /// Write a Gamma1(4) matrix as a word in T and U.
    Decompose {
        #[arg(long)]
        matrix: Mat2Z,
    },
    /// Level-4 residue counts and the indices 48, 12 and 6.
    Indices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExactCheck {
    Jacobi,
    Lagrange,
    FullJacobi,
    Ode,
    PsiTriple,
    Lambert,
    Proportionality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AnalyticCheck {
    Poisson,
    ThetaTransform,
    RowSum2,
    RowSum4,
    G4,
    Quasimodular,
    Xi,
    OdeSolution,
    Weight1,
    Cusp,
}

/// Result of one subcommand: machine-readable payload, text rendering, verdict.
struct Outcome {
    json: Value,
    text: String,
    pass: bool,
}

impl Outcome {
    fn from_reports(reports: Vec<CheckReport>) -> Outcome {
        let pass = reports.iter().all(|r| r.pass);
        let text = reports
            .iter()
            .map(|r| {
                let mut line = r.to_string();
                for (k, v) in &r.metrics {
                    line.push_str(&format!("\n  {k} = {v:.6e}"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n");
        let json = if reports.len() == 1 {
            serde_json::to_value(&reports[0]).expect("report serializes")
        } else {
            serde_json::to_value(&reports).expect("reports serialize")
        };
        Outcome { json, text, pass }
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_)
            | Error::Parse(_)
            | Error::Determinant(_)
            | Error::ImaginaryFloor { .. } => Failure::Usage(e.to_string()),
            Error::NotInGamma1Four(_) | Error::NonIntegral { .. } | Error::StepBound { .. } => {
                Failure::Check(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json renders"),
                Format::Text => out.text,
            };
            println!("{rendered}");
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            if cli.format == Format::Json {
                println!("{}", json!({ "pass": false, "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Expand { name, order, golden_dir } => expand(name, order, golden_dir),
        Command::Verify { check, order } => {
            let report = match check {
                ExactCheck::Jacobi => forms::verify_jacobi(order),
                ExactCheck::Lagrange => forms::verify_lagrange(order),
                ExactCheck::FullJacobi => forms::verify_full_jacobi(order),
                ExactCheck::Ode => forms::verify_ramanujan_ode(order),
                ExactCheck::PsiTriple => forms::verify_psi_triple(order),
                ExactCheck::Lambert => forms::verify_sigma_lambert(order),
                ExactCheck::Proportionality => forms::verify_final_proportionality(order),
            }?;
            Ok(Outcome::from_reports(vec![report]))
        }
        Command::VerifyAnalytic {
            check,
            tau,
            tau2,
            matrix,
            order,
            radius,
            row_cutoff,
            tol,
        } => {
            let cfg = EvalConfig {
                series_order: order,
                lattice_radius: radius,
                row_cutoff,
                tol,
            };
            cfg.validate()?;
            Ok(Outcome::from_reports(verify_analytic(check, tau, tau2, matrix, &cfg)?))
        }
        Command::R4 { n } => r4(n),
        Command::ReduceTau { tau } => {
            let (reduced, word) = modular::reduce_to_fundamental(tau)?;
            Ok(Outcome {
                json: json!({
                    "tau": [tau.re(), tau.im()],
                    "reduced": [reduced.re(), reduced.im()],
                    "word": word.to_string(),
                    "pass": true,
                }),
                text: format!("reduced: {reduced}\nword: {word}"),
                pass: true,
            })
        }
        Command::Decompose { matrix } => {
            let word = modular::decompose(&matrix)?;
            let pass = modular::word_eval(&word) == matrix;
            Ok(Outcome {
                json: json!({ "matrix": matrix.to_string(), "word": word.to_string(), "pass": pass }),
                text: word.to_string(),
                pass,
            })
        }
        Command::Indices => {
            let ix = modular::count_sl2_z4();
            let pass = (ix.index_gamma4, ix.index_gamma1_4, ix.index_gamma1_4_psl) == (48, 12, 6);
            Ok(Outcome {
                json: json!({
                    "sl2_z4": ix.sl2_z4,
                    "gamma1_image": ix.gamma1_image,
                    "pm_gamma1_image": ix.pm_gamma1_image,
                    "index_gamma4": ix.index_gamma4,
                    "index_gamma1_4": ix.index_gamma1_4,
                    "index_gamma1_4_psl": ix.index_gamma1_4_psl,
                    "pass": pass,
                }),
                text: format!(
                    "|SL(2,Z/4)| = {}\n[SL(2,Z) : Gamma(4)] = {}\n[SL(2,Z) : Gamma1(4)] = {} / {} = {}\n[PSL(2,Z) : image of Gamma1(4)] = {} / {} = {}",
                    ix.sl2_z4,
                    ix.index_gamma4,
                    ix.sl2_z4,
                    ix.gamma1_image,
                    ix.index_gamma1_4,
                    ix.sl2_z4,
                    ix.pm_gamma1_image,
                    ix.index_gamma1_4_psl
                ),
                pass,
            })
        }
    }
}

fn expand(name: FormName, order: usize, golden_dir: Option<PathBuf>) -> Result<Outcome, Failure> {
    let named = NamedSeries::build(name, order)?;
    let coeffs = named.series.coeffs();
    if let Some(dir) = golden_dir {
        fs::create_dir_all(&dir)
            .and_then(|_| fs::write(dir.join(format!("{name}.golden")), named.series.to_golden()))
            .map_err(|e| Failure::Usage(format!("cannot write golden file: {e}")))?;
    }
    let text = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| format!("{n}: {c}"))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome {
        json: json!({
            "name": name.as_str(),
            "order": order,
            "coefficients": coeffs.iter().map(Rational::to_string).collect::<Vec<_>>(),
            "pass": true,
        }),
        text,
        pass: true,
    })
}

/// Coefficient of `q^n` in `theta^4`, as `sum_k [theta^2]_k [theta^2]_{n-k}`.
fn theta4_coefficient(n: usize) -> Rational {
    let theta = forms::theta(n);
    let support: Vec<(usize, &Rational)> = theta
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Rational::from_integer(0.into()))
        .collect();
    let mut square = vec![Rational::from_integer(0.into()); n + 1];
    for &(i, a) in &support {
        for &(j, b) in support.iter().take_while(|(j, _)| i + j <= n) {
            square[i + j] += a * b;
        }
    }
    (0..=n).map(|k| &square[k] * &square[n - k]).sum()
}

fn r4(n: u64) -> Result<Outcome, Failure> {
    let brute = number_theory::r4_bruteforce(n)?;
    let jacobi = number_theory::jacobi_count(n as i64)?;
    let series = theta4_coefficient(n as usize);
    let pass = Rational::from_integer(brute.clone()) == series && brute == jacobi;
    Ok(Outcome {
        json: json!({
            "n": n,
            "bruteforce": brute.to_string(),
            "jacobi": jacobi.to_string(),
            "theta4": series.to_string(),
            "pass": pass,
        }),
        text: format!("bruteforce: {brute}\njacobi: {jacobi}\ntheta4: {series}"),
        pass,
    })
}

fn verify_analytic(
    check: AnalyticCheck,
    tau: UHPoint,
    tau2: UHPoint,
    matrix: Option<Mat2Z>,
    cfg: &EvalConfig,
) -> Result<Vec<CheckReport>, Error> {
    let reports = match check {
        AnalyticCheck::Poisson => vec![analytic::check_poisson(tau.im())?],
        AnalyticCheck::ThetaTransform => vec![analytic::check_theta_transform(tau, cfg)?],
        AnalyticCheck::RowSum2 => vec![analytic::check_row_sum2(tau, cfg)?],
        AnalyticCheck::RowSum4 => vec![analytic::check_row_sum4(tau, cfg)?],
        AnalyticCheck::G4 => {
            let mut r = vec![analytic::check_g4_expansion(tau, cfg)?];
            if let Some(a) = &matrix {
                r.push(analytic::check_g4_transform(tau, a, cfg)?);
            }
            r
        }
        AnalyticCheck::Quasimodular => {
            let a = matrix.unwrap_or_else(Mat2Z::u);
            vec![analytic::check_l_quasimodular(tau, &a, cfg)?]
        }
        AnalyticCheck::Xi => {
            let a = matrix.unwrap_or_else(Mat2Z::u);
            vec![analytic::check_xi_invariance(tau, &a, cfg)?]
        }
        AnalyticCheck::OdeSolution => vec![
            analytic::check_ode_solution(tau, cfg)?,
            analytic::check_g_properties(tau, tau2, cfg)?,
        ],
        AnalyticCheck::Weight1 => {
            let a = matrix.unwrap_or_else(Mat2Z::s);
            vec![analytic::check_weight1_invariance(tau, &a, cfg)?]
        }
        AnalyticCheck::Cusp => vec![analytic::check_cusp_boundedness(cfg)?],
    };
    Ok(reports)
}
