use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong shapes, unknown names, invalid parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value failed an axiom it must satisfy (associativity, module law, functoriality).
    #[error("validation failed for {entity}: {message}")]
    Validation { entity: String, message: String },

    /// A construction that is guaranteed to succeed on valid input did not.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }

    pub fn validation(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { entity: entity.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
