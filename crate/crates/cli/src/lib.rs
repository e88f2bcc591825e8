//! Command-line front end for `envelope_witness`: grid and file parsing,
//! table emission and the subcommand bodies used by the binary.

pub mod commands;
pub mod error;
pub mod grid;
pub mod ingest;
pub mod table;

pub use error::{CliError, Result};
