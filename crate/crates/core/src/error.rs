use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input shape: {0}")]
    InputShape(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("resource exhausted: {0}")]
    ResourceExhausted(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("dependency failure: {0}")]
    Dependency(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::InputShape(msg.into())
    }

    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InputShape(_) | Error::Parse { .. } | Error::Parameter(_) | Error::Decode(_) => {
                2
            }
            Error::Capacity(_)
            | Error::ResourceExhausted(_)
            | Error::Io(_)
            | Error::Dependency(_) => 3,
            Error::ContractViolation(_) | Error::Invariant(_) => 4,
        }
    }
}
