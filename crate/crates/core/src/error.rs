use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has a non-integral entry at ({row}, {col})")]
    NonIntegral { row: usize, col: usize },
    #[error("generators span rank {rank}, ambient rank is {ambient}")]
    NotFullRank { rank: usize, ambient: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex is degenerate")]
    DegenerateSimplex,
    #[error("constant term of the series must be positive")]
    NonPositiveConstantTerm,
    #[error("invalid root system type {family}{rank}")]
    InvalidType { family: char, rank: usize },
    #[error("budget exceeded: {needed} items required, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("form matrix does not contain an identity block")]
    NoIdentityBlock,
    #[error("integration dimension {dim} unsupported (maximum {max})")]
    DimensionUnsupported { dim: usize, max: usize },
    #[error("series does not converge: {0}")]
    NotConvergent(String),
    #[error("Hurwitz zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cache I/O: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
