use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("ambient dimension {0} exceeds the supported maximum of 4")]
    DimensionTooLarge(usize),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("direction is not in the interior of the cone")]
    NotInterior,
    #[error("sum of +inf and -inf is undefined")]
    MixedInfinity,
    #[error("operation needs a finite front, got {0}")]
    InfiniteFront(&'static str),
    #[error("cone mismatch between operands")]
    ConeMismatch,
    #[error("mapping is not proper: {0}")]
    ImproperMap(&'static str),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("simplex stalled after {0} pivots")]
    LpStall(usize),
    #[error("linear program is {0}")]
    LpStatus(&'static str),
    #[error("product grid of {entries} entries exceeds the cap of {cap}")]
    GridCap { entries: usize, cap: usize },
    #[error("perturbed argument not on the sample lattice: {0}")]
    OffGrid(String),
    #[error("sampled set not separable: instance violates convexity/regularity at this resolution")]
    NotSeparable,
    #[error("operator grid is empty after filtering")]
    EmptyGrid,
    #[error("unknown condition id {0:?}")]
    UnknownCondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
