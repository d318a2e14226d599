use thiserror::Error;

/// Errors raised by the polynomial, criterion and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inhomogeneous polynomial: term of degree {found} in a form of degree {expected}")]
    Inhomogeneous { expected: u32, found: u32 },
    #[error("variable x{index} out of range (n = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("the zero polynomial does not define a hypersurface")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid weight vector: {0}")]
    InvalidWeight(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural assertion failed: {0}")]
    Structural(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
