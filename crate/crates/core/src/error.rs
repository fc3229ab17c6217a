use thiserror::Error;

/// Errors raised by the numerical routines and the file-format readers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} did not converge after {iterations} iterations (last value {last:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        last: f64,
    },

    #[error("eigenvalue iteration stalled after {sweeps} sweeps (residual {residual:e})")]
    EigenNotConverged {
        sweeps: usize,
        residual: f64,
        best: Vec<num_complex::Complex64>,
    },

    #[error("matrix is numerically singular (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },

    #[error("invalid input for `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("regions are sampled on different angle grids")]
    GridMismatch,

    #[error("half-plane intersection is empty")]
    EmptyRegion,

    #[error("support of size {size} is too large for subset enumeration (limit {limit}); use the closed-form family")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("zero denominator: polynomial vanishes on the region")]
    ZeroDenominator,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
