use thiserror::Error;

use crate::syntax::Connective;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("fragment lacks connective {0}")]
    MissingConnective(Connective),
    #[error("formula is not a fusion of variables: {0}")]
    NotFlattenable(String),
    #[error("rule {0} mentions a connective or constant")]
    NotStructural(String),
    #[error("theory is not regular: {0}")]
    NotRegular(String),
    #[error("formula not in the ordering alphabet: {0}")]
    NotInAlphabet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
