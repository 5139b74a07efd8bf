//! Configuration, sweeps, falsification, reports and the CLI.

pub mod cli;
pub mod config;
pub mod falsify;
pub mod report;
pub mod sweep;

pub use cli::cli_main;
pub use config::{ConfigError, SweepConfig};
pub use falsify::run_falsify;
pub use report::{ResultRow, RunReport, Summary};
pub use sweep::{run_verify_identities, run_verify_theorems};
