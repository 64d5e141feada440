use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown differential or map {0:?}")]
    UnknownMap(String),

    #[error("map {name:?} has shift {shift}, expected {expected}")]
    WrongShift {
        name: String,
        shift: i32,
        expected: i32,
    },

    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),

    #[error("structure constant ({i}, {j}) -> {k} violates the grading")]
    GradingViolation { i: String, j: String, k: String },

    #[error("expected a {expected} algebra, found {found}")]
    WrongKind { expected: String, found: String },

    #[error("{name} does not square to zero in degree {degree}")]
    NotSquareZero { name: String, degree: i32 },

    #[error("structural failure: {0}")]
    Structural(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("non-integral spectrum of h in degree {degree}: {detail}")]
    NonIntegralSpectrum { degree: i32, detail: String },

    #[error("subspace not stable under {map}: {witness}")]
    NotStable { map: String, witness: String },

    #[error("line {line}, column {column}: {message}")]
    ModelFile {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
}

pub type Result<T> = std::result::Result<T, Error>;
