//! Library side of the `scurve` command-line tool.
//!
//! - [`config`]: JSON scenario configuration
//! - [`data`]: CSV series ingestion and output
//! - [`commands`]: `fit`, `forecast`, `map` and `halflife`
//! - [`verify`]: the self-check suite

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod verify;

pub use error::{CliError, Result};
