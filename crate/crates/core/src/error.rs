use thiserror::Error;

/// Errors raised by the decomposition toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (residual {residual:.3e} > {bound:.3e})")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("map is not completely positive (Choi min eigenvalue {min_eig:.3e} < {bound:.3e})")]
    NotCp { min_eig: f64, bound: f64 },

    #[error("weight matrix is not positive definite (min eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("weight hypothesis violated: {0}")]
    Weight(String),

    #[error("weight matrix must be nonzero")]
    ZeroWeight,

    #[error("invalid weight matrix: {0}")]
    InvalidWeight(String),

    #[error("generator is not in the completely positive Lie wedge (dissipative Choi min eigenvalue {min_eig:.3e} < {bound:.3e})")]
    NotInWedge { min_eig: f64, bound: f64 },

    #[error("map is not Hermitian-preserving (residual {residual:.3e} > {bound:.3e})")]
    NotHermitianPreserving { residual: f64, bound: f64 },

    #[error("generator is not trace-annihilating (residual {residual:.3e} > {bound:.3e})")]
    NotTracePreserving { residual: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("postcondition `{what}` failed: {value:.3e} > {bound:.3e}")]
    Postcondition {
        what: &'static str,
        value: f64,
        bound: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
