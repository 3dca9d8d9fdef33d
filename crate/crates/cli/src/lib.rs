//! JSON workspace documents, command dispatch and reports for the
//! `formclass` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{parse_point, run, Command, Flags};
pub use document::{load, load_str, resolve, Document, Workspace};
pub use error::CliError;
pub use report::Report;

/// Output encoding of a report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Loads `path`, runs `command` and renders the report.
pub fn execute(command: Command, path: &std::path::Path, flags: &Flags, format: Format) -> Result<String, CliError> {
    let ws = load(path)?;
    let report = run(command, &ws, flags)?;
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    })
}
