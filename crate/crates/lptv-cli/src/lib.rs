//! Command-line front end for the `lptv` library.
//!
//! Systems are read from the text format in [`format`] or looked up in the
//! catalog with `--system <id>`. Data goes to stdout as text, JSON or CSV
//! with 17 significant digits; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 bad input (parse errors carry line and column),
//! 2 no factor pair within the harmonic limit, 3 a verification check
//! failed, 4 numeric failure.
//!
//! The environment variable `LPTV_TOL` replaces the default tolerances of
//! `verify` and of the multiplier product check in `monodromy`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod input;
pub mod report;

pub use cli::{run, Cli};
pub use error::CliError;
