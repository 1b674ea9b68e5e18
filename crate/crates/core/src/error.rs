use thiserror::Error;

/// Errors raised by state validation, curve evaluation and the bound evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported subsystem dimensions {m}x{n} (need 2 <= m, n and m*n <= 64)")]
    BadDimensions { m: usize, n: usize },

    #[error("unsupported dimension d = {d}: {reason}")]
    BadDimension { d: usize, reason: &'static str },

    #[error("state vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid probability vector: {reason}")]
    InvalidProbabilities { reason: &'static str },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("rank {rank} outside 1..={max}")]
    BadRank { rank: usize, max: usize },

    #[error("invalid purity window [{lo}, {hi}] (max {max})")]
    BadWindow { lo: f64, hi: f64, max: f64 },

    #[error(
        "purity window infeasible: {accepted} of {attempts} draws accepted (rate {acceptance_rate:e})"
    )]
    WindowInfeasible {
        attempts: usize,
        accepted: usize,
        acceptance_rate: f64,
    },

    #[error("{quantity} = {value} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        quantity: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("no sign change found for the inflection root (last bracket end {y_hi})")]
    NoBracket { y_hi: f64 },

    #[error("measurement record is inconsistent: purity reconstructions differ by {difference:e}")]
    InconsistentRecord { difference: f64 },

    #[error("invalid measurement record: {reason}")]
    InvalidRecord { reason: &'static str },

    #[error("invalid purities: {reason}")]
    InvalidPurities { reason: &'static str },

    #[error("state rank {rank} exceeds {max}")]
    RankTooHigh { rank: usize, max: usize },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;
