//! Command-line front end for `elastica-core`: config handling, subcommand
//! dispatch, curve export and run records.

pub mod app;
pub mod config;
pub mod error;
pub mod export;
pub mod record;

pub use app::run;
pub use error::{CliError, CliResult};
