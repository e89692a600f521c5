use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("resource guard: suite `{suite}` needs about {needed_mb:.1} MB, above the ceiling of {ceiling_mb:.1} MB")]
    Resource { suite: String, needed_mb: f64, ceiling_mb: f64 },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), message: message.into() }
    }

    /// Process exit status: 2 for usage, config and I/O errors, 3 for the
    /// resource guard. Residual failures are not errors and map to 1 elsewhere.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Resource { .. } => 3,
            _ => 2,
        }
    }
}
