use multicx::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at {source_name}:{line}: {msg}")]
    Parse { source_name: String, line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 1 for a failed property check, 2 for usage, parse and input errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            _ => 2,
        }
    }

    /// Extra guidance printed after the message.
    pub fn hint(&self) -> Option<String> {
        match self {
            CliError::Core(CoreError::WindowTooSmall { needed_pmin, .. }) => {
                Some(format!("minimal window for this query: --window {needed_pmin} (pmin <= {needed_pmin})"))
            }
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
