use thiserror::Error;

/// Failures before any check runs. Each kind has its own exit code.
#[derive(Debug, Error)]
pub enum KitError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("computation: {0}")]
    Compute(#[from] sabinin_core::Error),
}

impl KitError {
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Usage(_) => 2,
            KitError::Input(_) => 3,
            KitError::Compute(_) => 4,
        }
    }
}
