use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] altkit_core::Error),
}

impl CliError {
    pub fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { location: location.into(), message: message.into() }
    }

    pub(crate) fn from_json(e: &serde_json::Error) -> Self {
        CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
