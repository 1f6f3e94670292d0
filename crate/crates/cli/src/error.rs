use std::io;
use std::path::PathBuf;

use mkdv_core::Error as CoreError;

/// Exit code for configuration and precondition errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for solver failures.
pub const EXIT_SOLVER: i32 = 3;
/// Exit code for file-system errors.
pub const EXIT_IO: i32 = 4;
/// Exit code when a verification check fails.
pub const EXIT_CHECK: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver failed at step {step}: {message}")]
    Solver { step: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("missing runs for table {table}: {}", rows.join(", "))]
    MissingRuns { table: u8, rows: Vec<String> },

    #[error("{0} verification check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::MissingRuns { .. } => EXIT_CONFIG,
            CliError::Solver { .. } => EXIT_SOLVER,
            CliError::Io { .. } => EXIT_IO,
            CliError::ChecksFailed(_) => EXIT_CHECK,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::StepFailed { step, source } => CliError::Solver {
                step,
                message: source.to_string(),
            },
            CoreError::NonConvergence { .. } | CoreError::Singular { .. } | CoreError::NonFinite { .. } => {
                CliError::Solver {
                    step: 0,
                    message: e.to_string(),
                }
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
