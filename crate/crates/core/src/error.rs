use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree {0}: integrated Legendre polynomials start at degree 2")]
    InvalidDegree(usize),
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("t = {t} lies outside [{left}, {right}]")]
    OutOfInterval { t: f64, left: f64, right: f64 },
    #[error("diffusion coefficient must be positive, found minimum {0}")]
    NonPositiveDiffusion(f64),
    #[error("reaction coefficient must be non-negative, found minimum {0}")]
    NegativeReaction(f64),
    #[error("singular matrix: pivot {pivot:e} at row {row}")]
    SingularMatrix { row: usize, pivot: f64 },
    #[error("L must be >= 2, got {0}")]
    InvalidOrder(usize),
    #[error("extrapolation tableau for L = {order} is ill-conditioned (residual {residual:e})")]
    IllConditionedTableau { order: usize, residual: f64 },
    #[error("collocation nodes do not determine a unique polynomial")]
    SingularCollocation,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("reference solution not converged: estimated oracle error {oracle_error:e} exceeds 1% of measured error {measured:e}")]
    OracleNotConverged { oracle_error: f64, measured: f64 },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
