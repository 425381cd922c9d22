//! Command-line front end: input specifications, deterministic JSON reports
//! and the subcommands of `vallab`.

pub mod commands;
pub mod error;
pub mod json;
pub mod spec;

pub use commands::{execute, Cli, Command};
pub use error::{CliError, CliResult};
