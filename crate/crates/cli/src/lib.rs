//! Command-line driver for the Toda lift experiments.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Cli, Outcome};
pub use config::{parse_config, ConfigError, ExperimentConfig, Format};
pub use error::CliError;
pub use output::{read_csv, write_table, Table, OUT_DIR_ENV};
