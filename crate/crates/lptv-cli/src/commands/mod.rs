//! Subcommands. Each returns its stdout text; diagnostics and a deferred
//! failure travel alongside.

use std::path::PathBuf;

use clap::Args;

use crate::error::CliError;

pub mod catalog;
pub mod htf;
pub mod monodromy;
pub mod solve;
pub mod sweep;
pub mod verify;

/// Result of a command that produced data.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    /// Lines for stderr.
    pub notes: Vec<String>,
    /// Failure to report after the data has been written.
    pub failure: Option<CliError>,
}

impl Output {
    pub fn data(stdout: String) -> Self {
        Output { stdout, ..Default::default() }
    }
}

/// Where the system comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// System definition file.
    pub input: Option<PathBuf>,
    /// Catalog id instead of a file, e.g. `4-4:H` or `markus-yamabe`.
    #[arg(long)]
    pub system: Option<String>,
    /// Catalog parameter override, `KEY=VALUE`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

impl Source {
    pub fn load(&self) -> Result<crate::input::System, CliError> {
        crate::input::load(self.input.as_deref(), self.system.as_deref(), &self.params)
    }
}

/// Sorted eigenvalues, for stable column order.
pub(crate) fn sorted(mut v: Vec<num::complex::Complex64>) -> Vec<num::complex::Complex64> {
    lptv::linalg::sort_complex(&mut v);
    v
}
