//! Command-line workflows around `refl-core`: config and data readers, JSON
//! reports, SVG plots and the `refl` subcommands.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod plot;
pub mod report;

pub use commands::{run, Cli};
pub use error::CliError;
