//! Absolute tolerances shared across the crate. States and operators are
//! dimensionless with entries of order one, so no scaling is applied.

/// Max entrywise |H - H†| accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Max entrywise |S - Sᵀ| accepted as complex symmetric.
pub const SYMMETRIC: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped.
pub const PSD_CLAMP: f64 = 1e-10;

/// Accepted trace drift before renormalization.
pub const TRACE: f64 = 1e-10;

/// Accepted norm drift for state vectors built in code.
pub const NORM: f64 = 1e-10;

/// Accepted norm or trace drift when parsing state files.
pub const PARSE_NORM: f64 = 1e-8;

/// Jacobi stops once the off-diagonal Frobenius mass falls below this
/// fraction of the matrix norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues below this are dropped when a density matrix is factored as
/// `X X†` for fidelity and decomposition work.
pub const RANK: f64 = 1e-13;

/// Ensemble members lighter than this are discarded.
pub const ZERO_WEIGHT: f64 = 1e-12;

/// Default imaginary-part tolerance for reality tests.
pub const REALITY: f64 = 1e-10;

/// Measures at or below this count as zero (free target).
pub const FREE_MEASURE: f64 = 1e-12;
