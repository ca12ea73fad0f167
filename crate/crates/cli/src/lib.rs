//! Command-line front end: configuration, sweeps, dataset files and validation runs.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{emit_figure_data, run, run_spectrum_sweep, run_validation};
pub use config::{parse_config, RunConfig};
pub use error::CliError;
