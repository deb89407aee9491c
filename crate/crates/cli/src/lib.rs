//! Verification harness behind the `symord` binary.
//!
//! [`run::run`] executes one suite described by a [`config::RunConfig`] and
//! returns a [`report::Report`]; rendering is deterministic for a given
//! configuration. Structure constants are read by
//! [`scfile::load_structure_constants`].

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod scfile;

pub use config::{Command, OutputFormat, RunConfig};
pub use error::CliError;
pub use report::{Report, TrialRecord};
pub use run::run;
pub use scfile::load_structure_constants;

/// Exit status when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when at least one check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage or input errors.
pub const EXIT_USAGE: i32 = 2;
