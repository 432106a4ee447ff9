use std::path::PathBuf;

use thiserror::Error;

/// Problem with the run configuration, anchored to a line when the source
/// location is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{}", path.display(), render(error))]
    Config { path: PathBuf, error: ConfigError },

    #[error("{operation} failed: {source}")]
    Numerical { operation: &'static str, source: evcomb::Error },

    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },
}

fn render(error: &ConfigError) -> String {
    match error.line {
        Some(line) => format!("{line}: {}", error.message),
        None => format!(" {}", error.message),
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::Output { .. } => 1,
        }
    }
}

/// Tags a library error with the operation that raised it.
pub trait During<T> {
    fn during(self, operation: &'static str) -> Result<T, CliError>;
}

impl<T> During<T> for evcomb::Result<T> {
    fn during(self, operation: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerical { operation, source })
    }
}
