use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point list")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not in the convex hull of the generators")]
    NotInHull,
    #[error("no affine map sends the sources onto the images")]
    Inconsistent,
    #[error("point is not a state of this space")]
    NotAState,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("invalid state space: {0}")]
    InvalidSpace(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
