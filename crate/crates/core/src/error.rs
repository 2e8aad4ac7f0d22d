use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid scale: alpha must be positive, got {0}")]
    InvalidScale(Rational),

    #[error("malformed game: {0}")]
    MalformedGame(String),

    #[error("unsupported arity: {what} needs exactly {expected} players, got {found}")]
    UnsupportedArity { what: &'static str, expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("optimism constraint error: {0}")]
    Constraint(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// File-format error located by a JSON path (`$.payoffs[1][0]`) or a
    /// `line:column` position for syntax errors.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
