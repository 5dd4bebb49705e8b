//! Library half of the `unimodal` binary: configuration layering and the
//! subcommand implementations, kept separate so they can be driven from tests.

pub mod commands;
pub mod config;

pub use commands::{run, CliError, Command, Report};
pub use config::RunConfig;
