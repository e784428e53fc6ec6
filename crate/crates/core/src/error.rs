//! Crate-wide error type.
//!
//! Errors fall into two classes that the CLI maps onto exit codes:
//! [`ErrorClass::Validation`] for bad inputs (malformed files, invalid
//! probabilities, out-of-range parameters) and [`ErrorClass::Computation`]
//! for failures of the numerics themselves (singular systems, diverged
//! training replicates).

use thiserror::Error;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input violated a precondition or file contract.
    Validation,
    /// The computation could not be completed on valid input.
    Computation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("utility {utility} undefined at outcome {outcome}: {reason}")]
    UtilityEval {
        utility: String,
        outcome: f64,
        reason: String,
    },

    #[error("unknown case study `{0}`")]
    UnknownCase(String),

    #[error("ingestion error at row {row}: {message}")]
    Ingestion { row: usize, message: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("infeasible target return {target}: achievable range is [{lo}, {hi}]")]
    Infeasible { target: f64, lo: f64, hi: f64 },

    #[error("solver error: {0}")]
    Solver(String),

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("bootstrap replicate {replicate} failed after retry: {message}")]
    ReplicateFailure { replicate: usize, message: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code class for this error (validation vs computation).
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Solver(_)
            | Error::Degenerate(_)
            | Error::ReplicateFailure { .. } => ErrorClass::Computation,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
