use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad arguments to an operation (shape mismatch, missing precondition).
    #[error("usage error: {0}")]
    Usage(String),
    /// The group or algebra lacks a structure the operation needs.
    #[error("capability error: {0}")]
    Capability(String),
    /// A descriptor or config failed validation.
    #[error("config error at `{field}`: {msg}")]
    Config { field: String, msg: String },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { field: field.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
