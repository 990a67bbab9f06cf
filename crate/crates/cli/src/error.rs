use bgf_core::FrameError;
use thiserror::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input. Exit 2.
    #[error("input error: {0}")]
    Input(String),
    /// The pair is not a bi-g-frame, so the operation is undefined. Exit 1.
    #[error("not a bi-g-frame: {0}")]
    NotFrame(String),
    /// A computation failed on valid input. Exit 3.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotFrame(_) => 1,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::NotBiGFrame => CliError::NotFrame(e.to_string()),
            FrameError::NotSquare { .. }
            | FrameError::ShapeMismatch(_)
            | FrameError::NonFinite(_)
            | FrameError::Empty(_)
            | FrameError::InvalidSpec(_)
            | FrameError::ConstraintViolated { .. }
            | FrameError::NotInvertibleController { .. } => CliError::Input(e.to_string()),
            FrameError::NotHermitian { .. }
            | FrameError::NotPositiveDefinite { .. }
            | FrameError::Singular
            | FrameError::RetriesExhausted { .. } => CliError::Numerical(e.to_string()),
        }
    }
}
