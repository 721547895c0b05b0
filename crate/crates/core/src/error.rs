use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid spectrum parameters: {0}")]
    InvalidParams(String),
    #[error("side marker {side} needs a two-component parameter vector, got {n} components")]
    InvalidSide { side: &'static str, n: usize },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("word length {len} exceeds the truncation bound {bound}")]
    BoundExceeded { len: usize, bound: usize },
    #[error("linear part is not invertible at {0}")]
    NotInvertible(String),
    #[error("oracle guard violated: {0}")]
    OracleGuard(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
