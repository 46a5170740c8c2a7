use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("measurement on an empty pool")]
    EmptyPool,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("value {value:?} is not a value of variable {variable:?}")]
    UnknownValue { variable: String, value: String },
    #[error("conditioning event sequence has probability zero")]
    ZeroCondition,
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("draw is ambiguous: {0}")]
    AmbiguousDraw(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid p-state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed event {0:?}, expected Variable:Value")]
    MalformedEvent(String),
    #[error("spanning vectors are linearly dependent (vector {index} has no new direction)")]
    RankDeficient { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operand shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
}
