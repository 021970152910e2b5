use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variable index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed field: {0}")]
    MalformedField(String),
    #[error("input outside carrier: {0}")]
    NotInCarrier(String),
    #[error("descendent coefficient needs at least 3 insertions, got {0}")]
    TooFewInsertions(usize),
    #[error("vector field is not Hamiltonian: {0}")]
    NotHamiltonian(String),
    #[error("outside verified domain: {0}")]
    OutsideVerifiedDomain(String),
    #[error("missing bracket of arity {0}")]
    MissingBracket(usize),
    #[error("arity cap must be at least 2, got {0}")]
    ArityCap(usize),
    #[error("linear system has no solution")]
    Unsolvable,
}

pub type Result<T> = std::result::Result<T, CoreError>;
