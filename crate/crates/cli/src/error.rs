use std::path::PathBuf;

use tap_core::TapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed text; `line` is 1-based, 0 when the problem is not tied to a line.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed metadata: {0}")]
    Meta(#[from] serde_json::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] TapError),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        CliError::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 usage, 2 I/O, 3 validation or verification,
    /// 4 solver precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Csv(_) => 2,
            CliError::Syntax { .. } | CliError::Invalid(_) | CliError::Verification(_) | CliError::Meta(_) => 3,
            CliError::Core(e) => match e {
                TapError::Precondition { .. } | TapError::TooLarge { .. } | TapError::NoApplicableSolver { .. } => 4,
                TapError::Parameter(_) => 1,
                _ => 3,
            },
        }
    }
}
