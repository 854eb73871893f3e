//! JSON documents and the batch command interface over `finmet`.

mod commands;
pub mod convert;
pub mod document;
pub mod error;
pub mod registry;
pub mod samples;
pub mod schema;

pub use commands::{run_command, Outcome};
pub use document::{parse_document, serialize, Document};
pub use error::CliError;
