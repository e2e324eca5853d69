use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("point {index} has dimension {found}, expected {expected}")]
    RaggedCloud {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite coordinate at point {point}, axis {axis}")]
    NonFiniteCoordinate { point: usize, axis: usize },

    #[error("invalid weight matrix: {0}")]
    InvalidMatrix(String),

    #[error("NaN entry in weight matrix at ({row}, {col})")]
    NanEntry { row: usize, col: usize },

    #[error("degenerate cloud: zero scale")]
    ZeroScale,

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("correspondence violated: clouds have {left} and {right} points")]
    CorrespondenceViolated { left: usize, right: usize },

    #[error("instance too large: {count} simplices exceed the cap of {cap}")]
    InstanceTooLarge { count: u128, cap: u64 },

    #[error("oracle limited to {limit} vertices, got {found}")]
    OracleTooLarge { limit: usize, found: usize },

    #[error("inclusion violated: sub-complex weight {sub} < super-complex weight {sup} at ({row}, {col})")]
    InclusionViolated {
        row: usize,
        col: usize,
        sub: f64,
        sup: f64,
    },

    #[error("infinite bar in dimension {dim} (birth {birth})")]
    InfiniteBar { dim: usize, birth: f64 },

    #[error("degenerate representation: zero variance")]
    DegenerateRepresentation,

    #[error("undefined correlation: all values tied")]
    UndefinedCorrelation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
