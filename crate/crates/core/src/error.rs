use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("singular form pairing: {0}")]
    FormPairing(String),
    #[error("not a member of W: {0}")]
    NotAMember(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Validation(_) => "validation-error",
            Error::FormPairing(_) => "form-pairing",
            Error::NotAMember(_) => "not-a-member",
            Error::Internal(_) => "internal",
            Error::Parse { .. } => "parse-error",
        }
    }

    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
