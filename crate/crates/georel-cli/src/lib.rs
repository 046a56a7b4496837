//! Library half of the `georel` command-line harness: input-file parsing,
//! CSV rendering of the seeded study tables, and the study-spec runner.
//!
//! Exit-code contract (stable across subcommands): 0 success, 2 input or
//! configuration error, 3 estimator-domain error.

pub mod commands;
pub mod error;
pub mod sample_file;
pub mod study_spec;
pub mod table_csv;
pub mod tables;

pub use error::{CliError, ExitCode};
