use std::fmt;

/// Error type shared by every module in the crate.
///
/// The variants map onto process exit codes: verification failures exit 1,
/// bad input exits 2 and capacity guards exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("layer overflow: {0}")]
    LayerOverflow(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl fmt::Display) -> Self {
        Error::Input(msg.to_string())
    }

    pub fn capacity(msg: impl fmt::Display) -> Self {
        Error::Capacity(msg.to_string())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Capacity(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
