//! Application-level errors and their process exit codes.

use std::fmt;

use latqed_core::CoreError;

/// Everything that can go wrong between the command line and a finished run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppError {
    /// Bad command-line invocation.
    Usage(String),
    /// Bad configuration file or parameters a solver rejected up front.
    Config(String),
    /// A numerical routine failed to converge or produced non-finite values.
    Numeric(String),
    /// Parameters left the regime a method is valid in.
    Regime(String),
    /// Filesystem trouble while reading the config or writing outputs.
    Io(String),
}

impl AppError {
    /// Process exit code for this error class: configuration problems exit
    /// with 2, numerical failures with 3, regime violations with 4, and
    /// filesystem trouble with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Config(_) => 2,
            AppError::Numeric(_) => 3,
            AppError::Regime(_) => 4,
            AppError::Io(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(msg) => write!(f, "usage error: {msg}"),
            AppError::Config(msg) => write!(f, "configuration error: {msg}"),
            AppError::Numeric(msg) => write!(f, "numeric error: {msg}"),
            AppError::Regime(msg) => write!(f, "regime error: {msg}"),
            AppError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<CoreError> for AppError {
    fn from(err: CoreError) -> AppError {
        match err {
            CoreError::Config(msg) => AppError::Config(msg),
            CoreError::Numeric(msg) => AppError::Numeric(msg),
            CoreError::Regime(msg) => AppError::Regime(msg),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> AppError {
        AppError::Io(err.to_string())
    }
}
