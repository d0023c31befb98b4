use thiserror::Error;

/// Errors raised by the numerical kernels, state validation and the
/// conversion calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} entries for a square matrix, found {found}")]
    NotSquare { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace {0} is not 1")]
    BadTrace(f64),

    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not complex symmetric (max deviation {0:e})")]
    NotSymmetric(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("operation requires dimension at least 2")]
    DegenerateDimension,

    #[error("channel is not trace preserving")]
    NotTracePreserving,

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("ensemble size {size} is smaller than the state rank {rank}")]
    BadEnsembleSize { size: usize, rank: usize },

    #[error("fidelity {0} is outside [0, 1]")]
    BadFidelity(f64),

    #[error(
        "source witness {source_witness} is below target witness {target_witness}; the conversion is deterministic"
    )]
    BadRegime { source_witness: f64, target_witness: f64 },

    #[error("malformed state file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
