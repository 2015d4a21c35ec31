use thiserror::Error;

/// Errors raised by group arithmetic, searches and file handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is singular mod {p}")]
    SingularMatrix { p: u32 },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("infeasible: {what} is {count}, limit is {limit}")]
    Infeasible {
        what: String,
        count: u128,
        limit: u128,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
