use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("individual count {0} out of range (1..={max})", max = crate::MAX_VOTERS)]
    VoterCount(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("cannot parse rational {0:?}")]
    Rational(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed permutation: {0}")]
    Permutation(String),

    #[error("json: {0}")]
    Json(String),

    #[error("i/o: {0}")]
    Io(String),

    /// An internal consistency check failed, e.g. an LP witness did not
    /// survive substitution. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
