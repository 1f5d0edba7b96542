//! Configuration, command dispatch and output for the `mmsurf` binary.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, render, Command, ConfigError, RunConfig};
pub use output::{Manifest, Row};
pub use run::{run, RunError};

/// Every check passed.
pub const EXIT_PASS: i32 = 0;
/// A statistical or tolerance check failed.
pub const EXIT_FAIL: i32 = 1;
/// The configuration could not be parsed, or has an unknown key.
pub const EXIT_SYNTAX: i32 = 2;
/// The configuration is well formed but inconsistent, or a method does not
/// apply to it.
pub const EXIT_SEMANTIC: i32 = 3;
/// Reading the configuration or writing outputs failed.
pub const EXIT_IO: i32 = 4;
