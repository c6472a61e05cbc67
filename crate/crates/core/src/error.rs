use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A table, enumeration, or solver limit would be exceeded.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Arguments fall outside the hypothesis an operation or checker requires.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("families belong to different spaces: S({0},{1}) vs S({2},{3})")]
    SpaceMismatch(usize, usize, usize, usize),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, needed: impl ToString, limit: impl ToString) -> Self {
        Error::Capacity {
            what,
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
