//! Command-line front end: argument parsing, report formats and the
//! resumable results log.

pub mod commands;
pub mod config;
pub mod error;
pub mod persist;
pub mod report;

pub use commands::{run, Outcome};
pub use config::Cli;
pub use error::CliError;
