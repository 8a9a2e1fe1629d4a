//! Argument parsing and dispatch.

use clap::{Parser, Subcommand};

use crate::commands::{self, catalog::CatalogCmd, Output};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "lptv", version, about = "Floquet factorization and stability of linear periodic systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find a factor pair (P, R) of a series system.
    Solve(commands::solve::SolveArgs),
    /// Check a stored factor pair; exits 3 when a check fails.
    Verify(commands::verify::VerifyArgs),
    /// Stability class of R(ω) over a frequency grid, as CSV.
    Sweep(commands::sweep::SweepArgs),
    /// Monodromy matrix, multipliers and exponents, as JSON.
    Monodromy(commands::monodromy::MonodromyArgs),
    /// Harmonic transfer function blocks, as CSV.
    Htf(commands::htf::HtfArgs),
    /// List catalog entries or emit one as a system file.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Solve(a) => commands::solve::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Monodromy(a) => commands::monodromy::run(a),
        Command::Htf(a) => commands::htf::run(a),
        Command::Catalog(c) => commands::catalog::run(c),
    }
}
