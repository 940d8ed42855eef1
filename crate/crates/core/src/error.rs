use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the cone, group and splitting routines.
#[derive(Debug, Error)]
pub enum ConeError {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not invertible (smallest singular value {min_singular:.3e})")]
    NotInvertible { min_singular: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("function undefined on spectrum at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("fixed cone contains no positive-definite element")]
    EmptyCone,

    #[error("group is not a group of unitaries (residual {residual:.3e})")]
    NotUnitaryGroup { residual: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("group is not unitarizable: no positive-definite fixed point found")]
    NotUnitarizable,

    #[error("matrix is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("range of the expectation does not match the commutant (gap {gap:.3e})")]
    RangeMismatch { gap: f64 },

    #[error("subgroup is not normal: conjugate of generator {generator} left the subgroup")]
    NotNormal { generator: usize },

    #[error("bad specification: {0}")]
    BadSpec(String),

    #[error("malformed matrix data: {0}")]
    Format(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, ConeError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(ConeError::DimMismatch { expected, found })
    }
}
