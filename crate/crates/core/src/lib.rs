//! Exact q-series arithmetic, congruence-subgroup algebra and numerical
//! checks of the transformation laws behind Jacobi's four-squares theorem.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod forms;
pub mod modular;
pub mod number_theory;
pub mod report;
pub mod series;

pub use error::{Error, Result};
pub use report::{CheckReport, Witness};
pub use series::{QSeries, Rational};
