use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("unsupported local dimension {0}")]
    UnsupportedDimension(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not a permutation: column {0} is not a basis vector")]
    NotPermutation(String),
    #[error("gate not allowed here: {0}")]
    NonConforming(String),
    #[error("not T-lattice realizable: {0}")]
    NotRealizable(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
