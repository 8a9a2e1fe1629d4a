//! `lptv verify`: checks a stored factor pair against its system.

use std::path::PathBuf;

use clap::Args;
use lptv::floquet::{lemma_checks, FloquetSolution, TraceShift, Transforms};
use lptv::monodromy::{integrate_grid, period, reconstruct_phi, DEFAULT_STEPS};
use lptv::trigmat::TraceAntiderivative;
use lptv::{OmegaPoly, Rational, TrigMatrix};
use serde::Serialize;

use super::{Output, Source};
use crate::error::CliError;
use crate::format::Document;
use crate::input::read_document;
use crate::report::{self, tolerance, F};

/// Default bound on the largest residual coefficient, relative to `A`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Default bound on the transition cross-check, relative to `|Φ|`.
pub const TRANSITION_TOL: f64 = 1e-6;
const GRID_SAMPLES: usize = 16;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Solution file with [P] and [R] sections, as written by `solve`.
    #[arg(long)]
    pub solution: PathBuf,
    /// Frequency of the transition cross-check.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// RK4 steps per period for the cross-check.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    value: F,
    tolerance: F,
}

#[derive(Serialize)]
struct VerifyReport {
    system: String,
    solution: String,
    omega: F,
    residual_norm: F,
    checks: Vec<Check>,
    pass: bool,
}

/// Factor pair stored in a solution document.
pub fn solution_from_document(doc: Document<Rational>) -> Result<FloquetSolution<Rational>, CliError> {
    let p = doc.p.ok_or_else(|| CliError::Input(format!("solution `{}` has no [P] section", doc.name)))?;
    let r = doc.r.ok_or_else(|| CliError::Input(format!("solution `{}` has no [R] section", doc.name)))?;
    let psi1 = doc.psi1.unwrap_or_else(|| TrigMatrix::zeros(1, 1));
    let shift = TraceShift { psi0: doc.psi0.unwrap_or_else(OmegaPoly::zero), antiderivative: TraceAntiderivative::of_series(&psi1), psi1 };
    let record = doc.transforms.unwrap_or_default();
    let transforms = Transforms {
        canonical_basis: None,
        shift,
        frequency_divisor: record.frequency_divisor.max(1),
        identity_at_zero: record.identity_at_zero,
    };
    let det_p = p.determinant().ok().and_then(|d| d.as_omega_poly()).unwrap_or_else(OmegaPoly::zero);
    Ok(FloquetSolution { harmonics: p.harmonic_bound(), p, r, det_p, transforms, residual_norm: f64::NAN })
}

pub fn run(args: &VerifyArgs) -> Result<Output, CliError> {
    let system = args.source.load()?;
    let a = system.series()?;
    let doc = read_document(&args.solution)?;
    let sol_name = doc.name.clone();
    if doc.n != a.rows() {
        return Err(CliError::Input(format!("solution is {}×{}, system is {}×{}", doc.n, doc.n, a.rows(), a.rows())));
    }
    let mut sol = solution_from_document(doc)?;
    let residual = sol.residual(a).map_err(|e| CliError::Input(e.to_string()))?;
    sol.residual_norm = residual.max_abs();
    let lemmas = lemma_checks(a, &sol).map_err(|e| CliError::Numeric(e.to_string()))?;

    let omega = system.omega(args.omega);
    let res_tol = tolerance(RESIDUAL_TOL * a.max_abs().max(1.0))?;
    let phi_tol = tolerance(TRANSITION_TOL)?;
    let af = a.to_f64();
    let eval = |w: f64, t: f64| af.evaluate(w, t);
    let steps = (args.steps / GRID_SAMPLES).max(1);
    let grid = integrate_grid(&eval, omega, 0.0, period(omega), GRID_SAMPLES, steps);
    let mut phi_err: f64 = 0.0;
    for (t, rk) in &grid {
        let err = match reconstruct_phi(&sol, omega, *t, 0.0) {
            Ok(rec) => (&rec.value - rk).amax() / (1.0 + rk.amax()),
            Err(_) => f64::INFINITY,
        };
        phi_err = if err.is_nan() { f64::INFINITY } else { phi_err.max(err) };
    }

    let det_value = if lemmas.det_constant { 0.0 } else { 1.0 };
    let flag = |ok: bool| if ok { 0.0 } else { 1.0 };
    let checks = vec![
        Check { name: "residual", pass: sol.residual_norm <= res_tol, value: F(sol.residual_norm), tolerance: F(res_tol) },
        Check {
            name: "trace-identity",
            pass: lemmas.trace_identity,
            value: F(lemmas.trace_identity_error),
            tolerance: F(0.0),
        },
        Check { name: "det-p-constant", pass: lemmas.det_constant, value: F(det_value), tolerance: F(0.0) },
        Check { name: "periodicity", pass: lemmas.periodicity, value: F(flag(lemmas.periodicity)), tolerance: F(0.0) },
        Check { name: "transition-cross-check", pass: phi_err <= phi_tol, value: F(phi_err), tolerance: F(phi_tol) },
    ];
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect();
    let report = VerifyReport {
        system: system.name().to_string(),
        solution: sol_name,
        omega: F(omega),
        residual_norm: F(sol.residual_norm),
        pass: failed.is_empty(),
        checks,
    };
    let mut out = Output::data(report::to_json(&report)?);
    if !failed.is_empty() {
        out.failure = Some(CliError::Verification(failed));
    }
    Ok(out)
}
