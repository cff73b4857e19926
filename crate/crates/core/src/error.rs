use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("degree {s} does not divide extension degree {m}")]
    NonDivisorDegree { s: usize, m: usize },
    #[error("no subfield chain declared for this field")]
    NoChainDeclared,
    #[error("layer {0} of the subfield chain is empty")]
    EmptyLayer(usize),
    #[error("requested rank {requested} exceeds maximum {max}")]
    RankTooLarge { requested: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("basis elements are linearly dependent over the base field")]
    DependentBasis,
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("decoding failure: {0}")]
    DecodingFailure(String),
    #[error("ambiguous decoding: {0} codewords within radius")]
    AmbiguousDecoding(usize),
    #[error("enumeration of {count} candidates exceeds guard {guard}")]
    TooLargeToEnumerate { count: u128, guard: u128 },
    #[error("invalid distortion rank s={s} for lambda={lambda}")]
    InvalidDistortionRank { s: usize, lambda: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("missing field `{0}` for this system")]
    MissingField(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
