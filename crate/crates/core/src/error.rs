use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix {0} is not in Gamma1(4)")]
    NotInGamma1Four(String),

    #[error("matrix determinant is {0}, expected 1")]
    Determinant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("coefficient {index} is not an integer: {value}")]
    NonIntegral { index: usize, value: String },

    #[error("{what} exceeded its step bound of {bound}")]
    StepBound { what: &'static str, bound: usize },

    #[error("imaginary part {im} of the evaluation point is below the floor {floor}")]
    ImaginaryFloor { im: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
