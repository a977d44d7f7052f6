//! File IO and command-line front end for `ftvol-core`.
//!
//! - [`ingest`] reads daily close prices from CSV
//! - [`output`] writes tables, metadata sidecars and the comparison report
//! - [`config`] merges defaults, a config file, the environment and flags
//! - [`commands`] implements `returns`, `ftvol`, `compare` and `synth`

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;

pub use error::CliError;
