use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PencilError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigNoConvergence { sweeps: usize },
    #[error("matrix is not indefinite")]
    NotIndefinite,
    #[error("segment root needs q(y) < 0 < q(z), got q(y) = {p:e}, q(z) = {q:e}")]
    BadSigns { p: f64, q: f64 },
    #[error("no neutral root in (0, 1)")]
    NoRoot,
    #[error("segment root {t} outside (0, 1)")]
    BadRoot { t: f64 },
    #[error("could not bracket the maximiser of the minimum eigenvalue")]
    UnboundedBracket,
    #[error("sampler starved: no point found in {what}")]
    SamplerStarved { what: String },
    #[error("no verified feasible point (best minimum eigenvalue {best_min_eig:e})")]
    NotFeasible { best_min_eig: f64 },
    #[error("grid feasibility supports at most 4 parameters, got {m}")]
    GridTooLarge { m: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, PencilError>;
