use dirackit_exact::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("rescaling by zero is not an automorphism")]
    ZeroRescale,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("subspace of dimension {dim} is not Lagrangian in a fiber of dimension {n}")]
    NotLagrangian { dim: usize, n: usize },
    #[error("index {index} out of range for a frame of {len} sections")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("generically dependent input: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("relation solution has generic rank {rank}, expected {expected}")]
    RankCollapse { rank: usize, expected: usize },
    #[error("operation needs a chart with complex scalars")]
    NotComplexChart,
    #[error("{0} is not symmetric with respect to the endomorphism")]
    NotSymmetricWithTwist(&'static str),
    #[error("tuple is not in the relation space: {0}")]
    NotInRelationSpace(String),
    #[error("difference of the structures is not invertible")]
    NotTransverse,
    #[error("invalid generalized complex data: {0}")]
    InvalidGcs(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, GeomError>;
