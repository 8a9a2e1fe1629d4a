//! `lptv monodromy`: one-period transition matrix and its spectrum.

use clap::Args;
use lptv::catalog::SystemMatrix;
use lptv::monodromy::{
    characteristic_spectrum, commuting_shortcut, factorize_monodromy, log_factorize, monodromy_matrix, period, piecewise_transition,
    trace_integral, trace_integral_quadrature, Method, DEFAULT_STEPS,
};
use lptv::stability::{classify_monodromy, MARGINAL_TOL};
use nalgebra::DMatrix;
use serde::Serialize;

use super::{Output, Source};
use crate::error::CliError;
use crate::report::{self, complexes, dmatrix, tolerance, C, F};

/// Default tolerance of the multiplier product law.
pub const PRODUCT_TOL: f64 = 1e-8;

#[derive(Args, Debug)]
pub struct MonodromyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// RK4 steps per period.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Real logarithm `Φ(T, 0) = Y e^{TR}` with `Y² = I`.
    #[arg(long)]
    pub factorize: bool,
}

#[derive(Serialize)]
struct Factorization {
    r: Vec<Vec<F>>,
    period_multiplier: usize,
    y: Vec<Vec<F>>,
    montagnier_error: Option<F>,
}

#[derive(Serialize)]
struct MonodromyReport {
    system: String,
    omega: F,
    period: F,
    method: &'static str,
    steps: Option<usize>,
    monodromy: Vec<Vec<F>>,
    power_law_error: Option<F>,
    multipliers: Vec<C>,
    exponents: Vec<C>,
    exponent_ambiguity: F,
    product: C,
    expected_product: F,
    product_check: bool,
    stability: &'static str,
    factorization: Option<Factorization>,
}

pub fn run(args: &MonodromyArgs) -> Result<Output, CliError> {
    let system = args.source.load()?;
    let entry = &system.entry;
    if entry.aperiodic {
        return Err(CliError::Input(format!("`{}` is not periodic; it has no monodromy matrix", entry.id)));
    }
    let omega = system.omega(args.omega);
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(CliError::Input(format!("frequency must be positive, got {omega}")));
    }
    let t = period(omega);
    let steps = args.steps.max(1);
    let eval = entry.evaluator();

    let (transition, power_law, trace_int) = match &entry.a {
        SystemMatrix::Piecewise(pw) => {
            let segs = pw.segments(omega);
            let tr: f64 = segs.iter().map(|(m, dt)| m.trace() * dt).sum();
            (piecewise_transition(&segs), None, tr)
        }
        SystemMatrix::Series(a) => {
            let af = a.to_f64();
            let tr = trace_integral(&af, omega, 0.0, t);
            match commuting_shortcut(&af, omega, 0.0, t) {
                Some(tm) => (tm, None, tr),
                None => {
                    let m = monodromy_matrix(&eval, omega, steps);
                    (m.transition, Some(m.power_law_error), tr)
                }
            }
        }
        SystemMatrix::Closed(_) => {
            let m = monodromy_matrix(&eval, omega, steps);
            (m.transition, Some(m.power_law_error), trace_integral_quadrature(&eval, omega, 0.0, t, steps))
        }
    };
    let m: &DMatrix<f64> = &transition.value;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Numeric("monodromy matrix has non-finite entries".into()));
    }
    let spec = characteristic_spectrum(m, omega, trace_int, tolerance(PRODUCT_TOL)?);

    let factorization = if args.factorize {
        let direct = matches!(transition.method, Method::Piecewise | Method::ExpmCommuting);
        Some(if direct {
            let (r, mult, y) = factorize_monodromy(m, omega)?;
            Factorization { r: dmatrix(&r), period_multiplier: mult, y: dmatrix(&y), montagnier_error: None }
        } else {
            let f = log_factorize(&eval, omega, steps)?;
            Factorization {
                r: dmatrix(&f.r),
                period_multiplier: f.period_multiplier,
                y: dmatrix(&f.y),
                montagnier_error: Some(F(f.montagnier_error)),
            }
        })
    } else {
        None
    };

    let report = MonodromyReport {
        system: entry.id.clone(),
        omega: F(omega),
        period: F(t),
        method: transition.method.name(),
        steps: (transition.method == Method::Rk4).then_some(steps),
        monodromy: dmatrix(m),
        power_law_error: power_law.map(F),
        multipliers: complexes(&spec.multipliers),
        exponents: complexes(&spec.exponents),
        exponent_ambiguity: F(spec.exponent_ambiguity),
        product: spec.product.into(),
        expected_product: F(spec.expected_product),
        product_check: spec.product_check,
        stability: classify_monodromy(m, MARGINAL_TOL).class.name(),
        factorization,
    };
    Ok(Output::data(report::to_json(&report)?))
}
