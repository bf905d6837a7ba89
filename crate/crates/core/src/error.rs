use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("position {pos} out of range for text of length {len}")]
    Range { pos: usize, len: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("inconsistent input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    /// Process exit code for the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param(_) => 1,
            Error::Io(_) | Error::Format(_) | Error::Input(_) => 2,
            Error::Range { .. } | Error::Contract(_) => 3,
        }
    }
}
