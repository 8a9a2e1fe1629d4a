//! `lptv sweep`: stability of `R(ω)` over a frequency grid.

use std::path::PathBuf;

use clap::Args;
use lptv::floquet::{self, SolveOptions};
use lptv::stability::{critical_frequencies, sweep};
use lptv::{Exec, OmegaPolyMatrix, Rational};

use super::{sorted, Output, Source};
use crate::error::CliError;
use crate::format::fmt_f64;
use crate::input::read_document;
use crate::report;

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    /// File with an [R] section; skips solving.
    #[arg(long = "R", alias = "r", value_name = "FILE")]
    pub r: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Number of grid points, ends included.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Explicit grid, comma separated; replaces min/max/steps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub omega: Vec<f64>,
    /// Append the frequencies where the stability class can change.
    #[arg(long)]
    pub critical: bool,
    #[arg(long)]
    pub sequential: bool,
}

/// `steps` points from `min` to `max`; one point gives `[min]`.
pub fn uniform_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps).map(|k| min + (max - min) * k as f64 / (steps - 1) as f64).collect(),
    }
}

fn grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    if !args.omega.is_empty() {
        return Ok(args.omega.clone());
    }
    match (args.omega_min, args.omega_max, args.steps) {
        (Some(lo), Some(hi), Some(n)) if n > 0 => Ok(uniform_grid(lo, hi, n)),
        (Some(lo), None, Some(1)) => Ok(vec![lo]),
        _ => Err(CliError::Input("give --omega-min, --omega-max and --steps (at least 1), or --omega".into())),
    }
}

fn load_r(args: &SweepArgs, exec: Exec) -> Result<OmegaPolyMatrix<Rational>, CliError> {
    if let Some(path) = &args.r {
        if args.source.input.is_some() || args.source.system.is_some() {
            return Err(CliError::Input("--R replaces the system input; give only one".into()));
        }
        let doc = read_document(path)?;
        return doc.r.ok_or_else(|| CliError::Input(format!("{} has no [R] section", path.display())));
    }
    let system = args.source.load()?;
    let sol = floquet::solve(system.series()?, &SolveOptions { exec, ..Default::default() })?;
    Ok(sol.r)
}

pub fn run(args: &SweepArgs) -> Result<Output, CliError> {
    let exec = if args.sequential { Exec::Sequential } else { Exec::default() };
    let grid = grid(args)?;
    let r = load_r(args, exec)?;
    let n = r.n();
    let mut header = vec!["omega".to_string()];
    header.extend((1..=n).map(|k| format!("re_lambda_{k}")));
    header.extend((1..=n).map(|k| format!("im_lambda_{k}")));
    header.push("class".into());
    let mut rows = vec![header];
    for row in sweep(&r, &grid, exec) {
        let ev = sorted(row.eigenvalues);
        let mut cells = vec![fmt_f64(row.omega)];
        cells.extend(ev.iter().map(|z| fmt_f64(z.re)));
        cells.extend(ev.iter().map(|z| fmt_f64(z.im)));
        cells.push(row.class.name().to_string());
        rows.push(cells);
    }
    let mut out = report::to_csv(&rows)?;
    if args.critical {
        let mut crit = vec![vec!["critical_omega".to_string(), "event".to_string()]];
        for c in critical_frequencies(&r, &grid) {
            crit.push(vec![fmt_f64(c.omega), c.event.name().to_string()]);
        }
        out.push('\n');
        out.push_str(&report::to_csv(&crit)?);
    }
    Ok(Output::data(out))
}
