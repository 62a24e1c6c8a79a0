use thiserror::Error;

/// Workbench error classes. The CLI maps these onto process exit codes:
/// usage errors exit 1, budget exhaustion exits 2, invariant violations
/// exit 3. Invariant violations mean the library caught itself producing
/// something mathematically impossible and refused to continue.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Budget(_) => 2,
            Error::Invariant(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub fn budget(msg: impl Into<String>) -> Error {
    Error::Budget(msg.into())
}

pub fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
