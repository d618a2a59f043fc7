use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::series::{QSeries, Rational};

/// First disagreement found by an exact coefficient comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub left: String,
    pub right: String,
}

/// Outcome of one verification.
///
/// Exact checks carry `order` and, on failure, a [`Witness`]. Numerical checks
/// carry `error` and `tol`; the error itself is the witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub identity: String,
    pub tau: Option<[f64; 2]>,
    pub matrix: Option<String>,
    pub error: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn exact(identity: impl Into<String>, order: usize, witness: Option<Witness>) -> Self {
        CheckReport {
            identity: identity.into(),
            tau: None,
            matrix: None,
            error: None,
            tol: None,
            pass: witness.is_none(),
            order: Some(order),
            witness,
            note: None,
            metrics: BTreeMap::new(),
        }
    }

    /// A numerical check passes iff `error` is finite and `error < tol`.
    pub fn numeric(identity: impl Into<String>, error: f64, tol: f64) -> Self {
        CheckReport {
            identity: identity.into(),
            tau: None,
            matrix: None,
            error: Some(error),
            tol: Some(tol),
            pass: error.is_finite() && error < tol,
            order: None,
            witness: None,
            note: None,
            metrics: BTreeMap::new(),
        }
    }

    pub fn at_tau(mut self, re: f64, im: f64) -> Self {
        self.tau = Some([re, im]);
        self
    }

    pub fn with_matrix(mut self, m: impl fmt::Display) -> Self {
        self.matrix = Some(m.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    /// Failed reports always carry either a coefficient witness or an error value.
    pub fn has_witness(&self) -> bool {
        self.witness.is_some() || self.error.is_some()
    }

    /// Combines several reports into one that passes iff all of them pass.
    /// The first failing part supplies the witness.
    pub fn all(identity: impl Into<String>, parts: &[CheckReport]) -> Self {
        let first_fail = parts.iter().find(|r| !r.pass);
        let mut out = match first_fail {
            Some(f) => {
                let mut r = f.clone();
                r.note = Some(format!("failed part: {}", f.identity));
                r
            }
            None => {
                let mut r = parts.first().cloned().unwrap_or_else(|| CheckReport::exact("", 0, None));
                r.note = None;
                r.pass = true;
                r
            }
        };
        out.identity = identity.into();
        out.metrics = parts
            .iter()
            .flat_map(|p| p.metrics.iter().map(move |(k, v)| (format!("{}.{k}", p.identity), *v)))
            .collect();
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.pass { "PASS" } else { "FAIL" }, self.identity)?;
        if let Some(order) = self.order {
            write!(f, " order={order}")?;
        }
        if let Some([re, im]) = self.tau {
            write!(f, " tau={re}+{im}i")?;
        }
        if let Some(m) = &self.matrix {
            write!(f, " matrix={m}")?;
        }
        if let (Some(e), Some(t)) = (self.error, self.tol) {
            write!(f, " error={e:.3e} tol={t:.1e}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " first mismatch at q^{}: {} != {}", w.index, w.left, w.right)?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// First index (ascending) where two series disagree, up to the smaller order.
pub fn first_mismatch(lhs: &QSeries, rhs: &QSeries) -> Option<Witness> {
    let order = lhs.order().min(rhs.order());
    (0..=order)
        .find(|&n| lhs.coeff(n) != rhs.coeff(n))
        .map(|n| Witness {
            index: n,
            left: lhs.coeff(n).to_string(),
            right: rhs.coeff(n).to_string(),
        })
}

/// Exact comparison report for `lhs == rhs`.
pub fn compare_series(identity: &str, lhs: &QSeries, rhs: &QSeries) -> CheckReport {
    let order = lhs.order().min(rhs.order());
    CheckReport::exact(identity, order, first_mismatch(lhs, rhs))
}

pub(crate) fn rational_witness(index: usize, left: &Rational, right: &Rational) -> Witness {
    Witness {
        index,
        left: left.to_string(),
        right: right.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_pass_rule() {
        assert!(CheckReport::numeric("x", 1e-12, 1e-10).pass);
        assert!(!CheckReport::numeric("x", 1e-9, 1e-10).pass);
        assert!(!CheckReport::numeric("x", f64::NAN, 1e-10).pass);
    }

    #[test]
    fn failing_reports_have_witnesses() {
        let a = QSeries::from_integers([1, 2, 3]).unwrap();
        let b = QSeries::from_integers([1, 2, 4]).unwrap();
        let r = compare_series("a=b", &a, &b);
        assert!(!r.pass);
        assert!(r.has_witness());
        let w = r.witness.unwrap();
        assert_eq!((w.index, w.left.as_str(), w.right.as_str()), (2, "3", "4"));
        assert!(compare_series("a=a", &a, &a).pass);
    }

    #[test]
    fn combined_report_takes_first_failure() {
        let ok = CheckReport::numeric("ok", 0.0, 1.0);
        let bad = CheckReport::numeric("bad", 2.0, 1.0);
        let all = CheckReport::all("both", &[ok.clone(), bad]);
        assert!(!all.pass);
        assert_eq!(all.error, Some(2.0));
        assert!(CheckReport::all("one", &[ok]).pass);
    }
}
