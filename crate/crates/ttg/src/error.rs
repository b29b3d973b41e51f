use thiserror::Error;

/// Crate-wide error type. Parse/semantic errors carry source locations so
/// the command line can report them precisely; the remaining variants
/// distinguish bad inputs from violated API contracts and resource caps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("semantic error at {line}:{col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("not spectrally representable: {0}")]
    NotRepresentable(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Error {
        Error::Contract(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
