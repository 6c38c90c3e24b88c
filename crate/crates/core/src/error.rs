use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("degenerate segment")]
    DegenerateSegment,

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("non-convex vertex list: {0}")]
    NonConvex(String),

    #[error("not an atomic body")]
    NotAtomic,

    #[error("point is not strictly inside the segment")]
    NotOnSegment,

    #[error("not a separating chord")]
    NotSeparatingChord,

    #[error("point is on boundary")]
    OnBoundary,

    #[error("point is outside the body")]
    Outside,

    #[error("expected a {expected}, got a {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid partition: condition {condition} violated ({detail})")]
    InvalidPartition { condition: u8, detail: String },

    #[error("base case: unit vectors have no mate")]
    BaseCase,

    #[error("not prime: gcd of components must be 1")]
    NotPrime,

    #[error("decomposition invariant violated: {0}")]
    InvariantViolated(String),

    #[error("positive scaling only")]
    PositiveScalingOnly,

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("nonzero tropical coefficient unsupported (column {column})")]
    NonzeroTropicalCoefficient { column: usize },

    #[error("invalid json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
