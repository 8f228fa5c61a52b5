use thiserror::Error;

/// Errors raised by matrix construction, spectral calculus and the checks built on them.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "matrix is not square or has wrong entry count ({entries} entries for dimension {dim})"
    )]
    Shape { dim: usize, entries: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: asymmetry residual {residual:e} exceeds {limit:e}")]
    NotHermitian { residual: f64, limit: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e} (threshold {threshold:e})")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps: off-diagonal norm {off_norm:e}"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error(
        "matrix is numerically singular: smallest singular value {smallest:e}, largest {largest:e}"
    )]
    NearSingular { smallest: f64, largest: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, MatError>;
