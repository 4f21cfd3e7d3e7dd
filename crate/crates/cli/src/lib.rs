//! The `fairkit` command line: document format, commands and output writers.

pub mod cli;
pub mod commands;
pub mod document;
pub mod format;
pub mod plot;
pub mod selftest;

pub use cli::Cli;
pub use commands::{emit, run, CliError, Output};
