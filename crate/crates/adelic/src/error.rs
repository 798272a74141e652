use std::path::PathBuf;

/// Errors surfaced by the command-line front end, one exit code per class.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("coefficients are not given in a power basis")]
    NotPowerBasis,
    #[error("fetch failed for {label}: {reason}")]
    Fetch { label: String, status: Option<u16>, reason: String },
    #[error("{label} is not cached and --offline is set")]
    OfflineMiss { label: String },
    #[error("io error at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("data inconsistency: {0}")]
    Math(String),
    #[error("self-test failed: {0}")]
    Selftest(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Schema(_) => 3,
            AppError::NotPowerBasis => 4,
            AppError::Fetch { .. } => 5,
            AppError::OfflineMiss { .. } => 6,
            AppError::Io { .. } => 7,
            AppError::Math(_) => 8,
            AppError::Selftest(_) => 9,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    pub fn math(e: impl std::fmt::Display) -> Self {
        AppError::Math(e.to_string())
    }
}
