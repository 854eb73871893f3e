use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
    /// A value-level error found while reading a document.
    #[error("{0}")]
    Malformed(finmet::Error),
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("{command} expects {expected} input document(s), got {got}")]
    Arity { command: String, expected: String, got: usize },
    #[error("input {index} of {command} must be a {expected} document, got {got}")]
    WrongKind { command: String, index: usize, expected: String, got: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] finmet::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "E_PARSE",
            CliError::Malformed(e) | CliError::Core(e) => e.code(),
            CliError::UnknownKind(_) => "E_UNKNOWN_KIND",
            CliError::UnknownCommand(_) => "E_UNKNOWN_COMMAND",
            CliError::Arity { .. } => "E_ARITY",
            CliError::WrongKind { .. } => "E_WRONG_KIND",
            CliError::Usage(_) => "E_USAGE",
            CliError::Io { .. } => "E_IO",
        }
    }

    /// 1 for semantic violations, 2 for everything that stops before the
    /// operation runs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => 1,
            _ => 2,
        }
    }

    pub fn report(&self) -> Value {
        let witness = match self {
            CliError::Malformed(e) | CliError::Core(e) => e.witness(),
            CliError::Parse { position, .. } => json!({ "position": position }),
            CliError::Arity { expected, got, .. } => json!({ "expected": expected, "got": got }),
            CliError::WrongKind { index, expected, got, .. } => {
                json!({ "input": index, "expected": expected, "got": got })
            }
            _ => json!({}),
        };
        json!({ "code": self.code(), "message": self.to_string(), "witness": witness })
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
