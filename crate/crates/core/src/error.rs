use thiserror::Error;

/// Errors raised by constructors and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function or type.
    #[error("domain error: {0}")]
    Domain(String),

    /// A run configuration failed validation. `field` names the offender.
    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    /// An intermediate quantity became NaN or infinite.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
