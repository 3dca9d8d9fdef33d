use std::path::PathBuf;

use formclass_core::ParseError;
use thiserror::Error;

/// Everything that stops a command before it produces a report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("syntax error at {path}, line 1, {source}")]
    Syntax {
        path: String,
        #[source]
        source: ParseError,
    },

    #[error("undeclared {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("missing required flag --{0}")]
    MissingFlag(&'static str),

    #[error("invalid value for --{flag}: {message}")]
    BadFlag { flag: &'static str, message: String },

    #[error(transparent)]
    Analysis(#[from] formclass_core::Error),
}

impl CliError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code. All errors are input errors; mathematical verdicts
    /// never reach this type.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
