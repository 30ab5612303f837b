use thiserror::Error;

/// Errors raised by the library. Each variant corresponds to a failed
/// precondition or an internal consistency check.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// The requested value is not representable in exact mode.
    #[error("mode error: {0}")]
    Mode(String),
    #[error("matrix is not tangent to the orbit: |<Ax,x>| = {residual:e}")]
    NonTangent { residual: f64 },
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("indeterminate intersection dimension; ambiguous spectrum {spectrum:?}")]
    Indeterminate { spectrum: Vec<f64> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
