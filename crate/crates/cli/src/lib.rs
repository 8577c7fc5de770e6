//! Command-line front end: configuration, CSV tables and subcommand dispatch.

mod commands;
mod config;
mod error;
mod table;

pub use commands::run_command;
pub use config::{
    parse_config, AmplitudeSettings, RunConfig, Simulation, SourceChoice, SweepSettings, KEYS,
};
pub use error::CliError;
pub use table::{write_csv, Cell, CsvTable, Schema};
