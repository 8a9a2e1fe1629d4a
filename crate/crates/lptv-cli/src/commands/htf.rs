//! `lptv htf`: harmonic transfer function blocks on a grid of `s`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use lptv::harmonic::{block_of, build_hss, htf_grid, poles, transmission_zeros, DEFAULT_TRUNC};
use lptv::{Exec, Mat, Rational, TrigMatrix};
use num::complex::Complex64;

use super::{Output, Source};
use crate::error::CliError;
use crate::format::fmt_f64;
use crate::input::read_document;
use crate::report;

#[derive(Args, Debug)]
pub struct HtfArgs {
    #[command(flatten)]
    pub source: Source,
    /// File with [B], [C] and/or [D] sections; defaults are B = C = I, D = 0.
    #[arg(long)]
    pub io: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Harmonics kept on each side of zero.
    #[arg(long, default_value_t = DEFAULT_TRUNC)]
    pub trunc: usize,
    /// Points `s`, comma separated, e.g. `0.1+0.2i,-1,2i`.
    #[arg(long = "s-grid", value_delimiter = ',', allow_hyphen_values = true)]
    pub s_grid: Vec<String>,
    /// Blocks `(k, l)` with `|k|, |l| ≤ blocks` are written.
    #[arg(long, default_value_t = 0)]
    pub blocks: usize,
    /// Write strip poles and transmission zeros instead of Ĝ.
    #[arg(long)]
    pub poles: bool,
    #[arg(long)]
    pub sequential: bool,
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim().replace(' ', "");
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse().ok(),
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

fn io_matrices(system_io: &BTreeMap<String, TrigMatrix<Rational>>, extra: Option<&PathBuf>, n: usize) -> Result<[TrigMatrix<f64>; 3], CliError> {
    let mut io = system_io.clone();
    if let Some(path) = extra {
        io.extend(read_document(path)?.io);
    }
    let b = io.remove("B").unwrap_or_else(|| TrigMatrix::constant(Mat::identity(n)));
    let c = io.remove("C").unwrap_or_else(|| TrigMatrix::constant(Mat::identity(n)));
    let d = io.remove("D").unwrap_or_else(|| TrigMatrix::zeros(c.rows(), b.cols()));
    Ok([b.to_f64(), c.to_f64(), d.to_f64()])
}

pub fn run(args: &HtfArgs) -> Result<Output, CliError> {
    let system = args.source.load()?;
    let a = system.series()?.to_f64();
    let omega = system.omega(args.omega);
    let [b, c, d] = io_matrices(&system.io, args.io.as_ref(), a.rows())?;
    if b.rows() != a.rows() || c.cols() != a.rows() {
        return Err(CliError::Input(format!("B must have {0} rows and C {0} columns", a.rows())));
    }
    let hss = build_hss(&a, &b, &c, &d, omega, args.trunc)?;
    let mut out = Output::default();

    if args.poles {
        let mut rows = vec![vec!["kind".to_string(), "re".into(), "im".into(), "reliable".into()]];
        for p in poles(&hss) {
            rows.push(vec!["pole".into(), fmt_f64(p.s.re), fmt_f64(p.s.im), p.reliable.to_string()]);
        }
        match transmission_zeros(&hss) {
            Ok(zs) => {
                for z in zs {
                    rows.push(vec!["zero".into(), fmt_f64(z.re), fmt_f64(z.im), String::new()]);
                }
            }
            Err(e) => out.notes.push(format!("transmission zeros not computed: {e}")),
        }
        out.stdout = report::to_csv(&rows)?;
        return Ok(out);
    }

    let points = args
        .s_grid
        .iter()
        .map(|s| parse_complex(s).ok_or_else(|| CliError::Input(format!("invalid complex number `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        return Err(CliError::Input("--s-grid needs at least one point".into()));
    }
    if args.blocks > args.trunc {
        return Err(CliError::Input(format!("--blocks {} exceeds --trunc {}", args.blocks, args.trunc)));
    }
    let exec = if args.sequential { Exec::Sequential } else { Exec::default() };
    let header = ["s_re", "s_im", "k", "l", "i", "j", "re", "im", "abs"];
    let mut rows = vec![header.iter().map(|h| h.to_string()).collect::<Vec<_>>()];
    let kb = args.blocks as i64;
    for (s, g) in points.iter().zip(htf_grid(&hss, &points, exec)) {
        let g = g?;
        for k in -kb..=kb {
            for l in -kb..=kb {
                let blk = block_of(&g, &hss, k, l, hss.ny, hss.nu);
                for i in 0..hss.ny {
                    for j in 0..hss.nu {
                        let z = blk[(i, j)];
                        rows.push(vec![
                            fmt_f64(s.re),
                            fmt_f64(s.im),
                            k.to_string(),
                            l.to_string(),
                            (i + 1).to_string(),
                            (j + 1).to_string(),
                            fmt_f64(z.re),
                            fmt_f64(z.im),
                            fmt_f64(z.norm()),
                        ]);
                    }
                }
            }
        }
    }
    out.stdout = report::to_csv(&rows)?;
    Ok(out)
}
