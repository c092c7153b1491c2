use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable count {0} exceeds the supported maximum of 16")]
    TooManyVariables(usize),

    #[error("malformed monomial string at token {token:?}: {reason}")]
    AnfParse { token: String, reason: String },

    #[error("variable index {index} out of range for {m} variables")]
    VariableOutOfRange { index: usize, m: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("form is not homogeneous of degree {degree}: {anf}")]
    NotHomogeneous { degree: usize, anf: String },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("malformed matrix: {0}")]
    MatrixParse(String),

    #[error("map is not in the stabilizer of {0}")]
    NotInStabilizer(String),

    #[error("dimension {dim} exceeds cap 2^{cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("enumerator length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error("orbit sizes sum to {actual}, expected {expected}")]
    OrbitSumMismatch { expected: String, actual: String },

    #[error("partition has {blocks} blocks but {enums} enumerators were given")]
    PartitionMismatch { blocks: usize, enums: usize },

    #[error("no equivalence found for {0} within {1} attempts")]
    NotFound(String, u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
