//! `lptv solve`: factor pair of a series system.

use clap::Args;
use lptv::floquet::{self, FloquetSolution, SolveOptions};
use lptv::stability::{classify, MARGINAL_TOL};
use lptv::{Exec, TrigMatrix};
use serde::Serialize;

use super::{sorted, Output, Source};
use crate::error::CliError;
use crate::format::{fmt_f64, Document, Entry, TransformRecord};
use crate::report::{self, complexes, dmatrix, C, F};

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    /// First harmonic count to try.
    #[arg(long)]
    pub p_hint: Option<usize>,
    /// Last harmonic count to try.
    #[arg(long)]
    pub p_max: Option<usize>,
    /// Frequencies at which to evaluate R, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub omega: Vec<f64>,
    /// Exact rational arithmetic (default).
    #[arg(long, conflicts_with = "float")]
    pub rational: bool,
    /// Floating-point arithmetic.
    #[arg(long)]
    pub float: bool,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Disable data parallelism.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Serialize)]
struct TransformsJson {
    frequency_divisor: usize,
    identity_at_zero: bool,
    canonicalized: bool,
    psi0: Vec<String>,
    psi1: Vec<report::Term>,
}

#[derive(Serialize)]
struct OmegaReport {
    omega: F,
    r: Vec<Vec<F>>,
    eigenvalues: Vec<C>,
    class: &'static str,
}

#[derive(Serialize)]
struct SolveReport {
    system: String,
    arithmetic: &'static str,
    harmonics: usize,
    residual_norm: F,
    det_p: Vec<String>,
    r: Vec<Vec<Vec<String>>>,
    p: Vec<report::Term>,
    transforms: TransformsJson,
    omega_reports: Vec<OmegaReport>,
}

/// Solution document: `P`, `R`, the trace shift and the transform record.
pub fn solution_document<T: Entry>(name: &str, sol: &FloquetSolution<T>) -> Document<T> {
    let mut doc = Document::new(name, sol.n());
    doc.p = Some(sol.p.clone());
    doc.r = Some(sol.r.clone());
    let shift = &sol.transforms.shift;
    if !shift.is_zero() {
        doc.psi0 = Some(shift.psi0.clone());
        doc.psi1 = Some(shift.psi1.clone());
    }
    doc.transforms = Some(TransformRecord {
        frequency_divisor: sol.transforms.frequency_divisor,
        identity_at_zero: sol.transforms.identity_at_zero,
        canonicalized: sol.transforms.canonical_basis.is_some(),
    });
    doc.report = vec![
        ("residual-norm".into(), fmt_f64(sol.residual_norm)),
        ("harmonics".into(), sol.harmonics.to_string()),
        ("det-p".into(), report::poly(&sol.det_p).join(" ")),
    ];
    doc
}

fn omega_reports<T: Entry>(sol: &FloquetSolution<T>, omegas: &[f64]) -> Vec<OmegaReport> {
    omegas
        .iter()
        .map(|&w| {
            let v = classify(&sol.r, w, MARGINAL_TOL);
            OmegaReport { omega: F(w), r: dmatrix(&sol.r.eval_f64(w)), eigenvalues: complexes(&sorted(v.eigenvalues)), class: v.class.name() }
        })
        .collect()
}

fn render<T: Entry>(name: &str, a: &TrigMatrix<T>, args: &SolveArgs, omegas: &[f64]) -> Result<String, CliError> {
    let opts = SolveOptions {
        p_hint: args.p_hint,
        p_max: args.p_max,
        exec: if args.sequential { Exec::Sequential } else { Exec::default() },
        ..Default::default()
    };
    let sol = floquet::solve(a, &opts)?;
    let reports = omega_reports(&sol, omegas);
    if args.json {
        let shift = &sol.transforms.shift;
        return report::to_json(&SolveReport {
            system: name.to_string(),
            arithmetic: if T::EXACT { "rational" } else { "float" },
            harmonics: sol.harmonics,
            residual_norm: F(sol.residual_norm),
            det_p: report::poly(&sol.det_p),
            r: report::omega_poly_matrix(&sol.r),
            p: report::terms(&sol.p),
            transforms: TransformsJson {
                frequency_divisor: sol.transforms.frequency_divisor,
                identity_at_zero: sol.transforms.identity_at_zero,
                canonicalized: sol.transforms.canonical_basis.is_some(),
                psi0: report::poly(&shift.psi0),
                psi1: report::terms(&shift.psi1),
            },
            omega_reports: reports,
        });
    }
    if args.csv {
        let n = sol.n();
        let mut header = vec!["omega".to_string()];
        header.extend((0..n * n).map(|k| format!("r_{}_{}", k / n + 1, k % n + 1)));
        header.extend((1..=n).map(|k| format!("re_lambda_{k}")));
        header.extend((1..=n).map(|k| format!("im_lambda_{k}")));
        header.push("class".into());
        let mut rows = vec![header];
        for rep in &reports {
            let mut row = vec![fmt_f64(rep.omega.0)];
            row.extend(rep.r.iter().flatten().map(|x| fmt_f64(x.0)));
            row.extend(rep.eigenvalues.iter().map(|z| fmt_f64(z.re.0)));
            row.extend(rep.eigenvalues.iter().map(|z| fmt_f64(z.im.0)));
            row.push(rep.class.to_string());
            rows.push(row);
        }
        return report::to_csv(&rows);
    }
    let mut text = solution_document(name, &sol).emit();
    for rep in &reports {
        let eig: Vec<String> = rep.eigenvalues.iter().map(|z| format!("({}, {})", fmt_f64(z.re.0), fmt_f64(z.im.0))).collect();
        text.push_str(&format!("# omega {}: {} eigenvalues {}\n", fmt_f64(rep.omega.0), rep.class, eig.join(" ")));
    }
    Ok(text)
}

pub fn run(args: &SolveArgs) -> Result<Output, CliError> {
    let system = args.source.load()?;
    let a = system.series()?;
    let omegas = if args.omega.is_empty() && args.csv { vec![system.omega(None)] } else { args.omega.clone() };
    let out = if args.float { render(system.name(), &a.to_f64(), args, &omegas)? } else { render(system.name(), a, args, &omegas)? };
    Ok(Output::data(out))
}
