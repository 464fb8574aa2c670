use thiserror::Error;

use crate::maxent::SolverReport;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A floating-point input lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact elimination found a non-positive leading principal minor.
    #[error("matrix is not positive definite: leading minor of order {order} is {sign}")]
    NotPositiveDefinite { order: usize, sign: &'static str },

    /// The dual Newton iteration stopped without an interior certificate.
    ///
    /// This is a diagnostic, never a proof that the target lies outside the cone.
    #[error("no interior certificate found at degree {degree}: {reason}")]
    NoInteriorCertificate {
        degree: usize,
        reason: String,
        report: SolverReport,
    },

    /// Internal numeric failure (non-exact division, singular Newton system, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
