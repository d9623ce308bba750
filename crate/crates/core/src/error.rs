use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification `{0}`: {1}")]
    FieldSpec(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0} is not irreducible")]
    ReducibleModulus(String),
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("{0} is not a square")]
    NotASquare(String),
    #[error("operation requires {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degenerate bilinear form: {0}")]
    Degenerate(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("expression is not homogeneous (degrees {0:?})")]
    Inhomogeneous(Vec<i64>),
    #[error("ideal membership failure: {0}")]
    Membership(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}
