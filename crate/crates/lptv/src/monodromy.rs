//! Transition matrices by RK4, by exponentiating a commuting integral, or as
//! products over piecewise-constant segments; monodromy matrices, the real
//! logarithm factorization and the spectral identities they satisfy.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::floquet::FloquetSolution;
use crate::linalg::{self, LinalgError};
use crate::scalar::Scalar;
use crate::trigmat::{Parity, TrigMatrix};

/// `(ω, t) ↦ A(t)`.
pub type Evaluator<'a> = dyn Fn(f64, f64) -> DMatrix<f64> + Sync + 'a;

/// Default RK4 steps per period.
pub const DEFAULT_STEPS: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonodromyError {
    #[error("monodromy matrix is singular")]
    SingularMonodromy,
    #[error("eigenvalue {0} is too close to the negative real axis to pick a logarithm branch")]
    LogBranchAmbiguity(Complex64),
    #[error("no real logarithm exists (eigenvalue {0} on the negative real axis)")]
    RealLogNonexistent(Complex64),
    #[error("P(t₀) is singular")]
    SingularP,
    #[error("matrix logarithm did not converge")]
    NoConvergence,
}

impl From<LinalgError> for MonodromyError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Singular => MonodromyError::SingularMonodromy,
            LinalgError::NegativeRealEigenvalue(z) => MonodromyError::RealLogNonexistent(z),
            LinalgError::NoConvergence => MonodromyError::NoConvergence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    ExpmCommuting,
    Piecewise,
    FloquetReconstructed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ExpmCommuting => "expm-commuting",
            Method::Piecewise => "piecewise",
            Method::FloquetReconstructed => "floquet-reconstructed",
        }
    }
}

/// `Φ(t₁, t₀)`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub value: DMatrix<f64>,
    pub t0: f64,
    pub t1: f64,
    pub method: Method,
}

pub fn period(omega: f64) -> f64 {
    TAU / omega
}

fn rk4_step(a: &Evaluator, omega: f64, t: f64, h: f64, phi: &DMatrix<f64>) -> DMatrix<f64> {
    let a0 = a(omega, t);
    let am = a(omega, t + h / 2.0);
    let a1 = a(omega, t + h);
    let k1 = &a0 * phi;
    let k2 = &am * (phi + &k1 * (h / 2.0));
    let k3 = &am * (phi + &k2 * (h / 2.0));
    let k4 = &a1 * (phi + &k3 * h);
    phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Classical RK4 on `Φ̇ = A(t)Φ`, `Φ(t₀) = I`.
pub fn integrate_transition(a: &Evaluator, omega: f64, t0: f64, t1: f64, steps: usize) -> TransitionMatrix {
    let value = integrate_from(a, omega, t0, t1, steps.max(1), a(omega, t0).nrows());
    TransitionMatrix { value, t0, t1, method: Method::Rk4 }
}

fn integrate_from(a: &Evaluator, omega: f64, t0: f64, t1: f64, steps: usize, n: usize) -> DMatrix<f64> {
    let h = (t1 - t0) / steps as f64;
    let mut phi = DMatrix::identity(n, n);
    for k in 0..steps {
        phi = rk4_step(a, omega, t0 + k as f64 * h, h, &phi);
    }
    phi
}

/// `Φ(t_k, t₀)` on the uniform grid `t_k = t₀ + k (t₁ − t₀)/samples`,
/// `k = 0..=samples`, with `steps_per_sample` RK4 steps between points.
pub fn integrate_grid(
    a: &Evaluator,
    omega: f64,
    t0: f64,
    t1: f64,
    samples: usize,
    steps_per_sample: usize,
) -> Vec<(f64, DMatrix<f64>)> {
    let n = a(omega, t0).nrows();
    let dt = (t1 - t0) / samples as f64;
    let h = dt / steps_per_sample as f64;
    let mut phi = DMatrix::identity(n, n);
    let mut out = vec![(t0, phi.clone())];
    for k in 0..samples {
        let start = t0 + k as f64 * dt;
        for j in 0..steps_per_sample {
            phi = rk4_step(a, omega, start + j as f64 * h, h, &phi);
        }
        out.push((t0 + (k + 1) as f64 * dt, phi.clone()));
    }
    out
}

/// `∫_{t₀}^{t₁} A` for a series at fixed ω.
pub fn integral(a: &TrigMatrix<f64>, omega: f64, t0: f64, t1: f64) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(a.rows(), a.cols());
    for (r, l, parity, m) in a.terms() {
        let w = omega.powi(r as i32);
        let lw = l as f64 * omega;
        let f = if l == 0 || lw == 0.0 {
            match parity {
                Parity::Cos => t1 - t0,
                Parity::Sin => 0.0,
            }
        } else {
            match parity {
                Parity::Cos => ((lw * t1).sin() - (lw * t0).sin()) / lw,
                Parity::Sin => -((lw * t1).cos() - (lw * t0).cos()) / lw,
            }
        };
        acc += m.to_dmatrix() * (w * f);
    }
    acc
}

const COMMUTE_SAMPLES: usize = 16;
const COMMUTE_TOL: f64 = 1e-10;

/// `exp(∫_{t₀}^{t₁} A)` when `A(s)` commutes with `∫_{t₀}^{s} A` at sampled
/// `s ∈ (t₀, t₁]`.
pub fn commuting_shortcut(a: &TrigMatrix<f64>, omega: f64, t0: f64, t1: f64) -> Option<TransitionMatrix> {
    commuting_shortcut_with(&|w, t| a.evaluate(w, t), &|s0, s1| integral(a, omega, s0, s1), omega, t0, t1)
}

/// [`commuting_shortcut`] for an evaluator with a closed-form integral.
pub fn commuting_shortcut_with(
    a: &Evaluator,
    integral: &dyn Fn(f64, f64) -> DMatrix<f64>,
    omega: f64,
    t0: f64,
    t1: f64,
) -> Option<TransitionMatrix> {
    for k in 1..=COMMUTE_SAMPLES {
        let s = t0 + (t1 - t0) * k as f64 / COMMUTE_SAMPLES as f64;
        let (am, b) = (a(omega, s), integral(t0, s));
        let comm = &am * &b - &b * &am;
        let scale = 1.0 + linalg::max_abs(&am) * linalg::max_abs(&b);
        if linalg::max_abs(&comm) > COMMUTE_TOL * scale {
            return None;
        }
    }
    Some(TransitionMatrix { value: linalg::expm(&integral(t0, t1)), t0, t1, method: Method::ExpmCommuting })
}

/// `Φ(T, 0)` with the power law `Φ(kT, 0) = Φ(T, 0)^k` checked for
/// `k = 2, 3`.
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub transition: TransitionMatrix,
    /// Largest relative deviation from the power law.
    pub power_law_error: f64,
}

pub fn monodromy_matrix(a: &Evaluator, omega: f64, steps: usize) -> Monodromy {
    let t = period(omega);
    let transition = integrate_transition(a, omega, 0.0, t, steps);
    let m = &transition.value;
    let mut power_law_error: f64 = 0.0;
    let mut power = m.clone();
    for k in 2..=3 {
        power = &power * m;
        let direct = integrate_transition(a, omega, 0.0, k as f64 * t, k * steps).value;
        let err = linalg::max_abs(&(&direct - &power)) / (1.0 + linalg::max_abs(&power));
        power_law_error = power_law_error.max(err);
    }
    Monodromy { transition, power_law_error }
}

/// Ordered product `exp(A_m d_m)⋯exp(A_1 d_1)`.
pub fn piecewise_transition(segments: &[(DMatrix<f64>, f64)]) -> TransitionMatrix {
    let n = segments.first().map_or(0, |s| s.0.nrows());
    let mut value = DMatrix::identity(n, n);
    let mut t1 = 0.0;
    for (a, d) in segments {
        if *d != 0.0 {
            value = linalg::expm(&(a * *d)) * value;
        }
        t1 += d;
    }
    TransitionMatrix { value, t0: 0.0, t1, method: Method::Piecewise }
}

/// RK4 run separately on each constant segment and composed.
pub fn integrate_segments(segments: &[(DMatrix<f64>, f64)], steps_per_segment: usize) -> TransitionMatrix {
    let n = segments.first().map_or(0, |s| s.0.nrows());
    let mut value = DMatrix::identity(n, n);
    let mut t1 = 0.0;
    for (a, d) in segments {
        let f = |_: f64, _: f64| a.clone();
        value = integrate_transition(&f, 0.0, 0.0, *d, steps_per_segment).value * value;
        t1 += d;
    }
    TransitionMatrix { value, t0: 0.0, t1, method: Method::Rk4 }
}

/// `∫_{t₀}^{t₁} trace A` for a series; only the mean survives over whole
/// periods, but partial intervals are handled too.
pub fn trace_integral(a: &TrigMatrix<f64>, omega: f64, t0: f64, t1: f64) -> f64 {
    integral(a, omega, t0, t1).trace()
}

/// Composite Simpson approximation of `∫_{t₀}^{t₁} trace A`.
pub fn trace_integral_quadrature(a: &Evaluator, omega: f64, t0: f64, t1: f64, intervals: usize) -> f64 {
    let m = intervals.max(2) + intervals % 2;
    let h = (t1 - t0) / m as f64;
    let f = |k: usize| a(omega, t0 + k as f64 * h).trace();
    let mut acc = f(0) + f(m);
    for k in 1..m {
        acc += f(k) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Outcome of `det Φ(t₁, t₀) = exp ∫ trace A`.
#[derive(Debug, Clone, Copy)]
pub struct LiouvilleCheck {
    pub det: f64,
    pub expected: f64,
    pub error: f64,
    pub pass: bool,
}

pub fn jacobi_liouville_check(phi: &TransitionMatrix, trace_integral: f64, tol: f64) -> LiouvilleCheck {
    let det = phi.value.determinant();
    let expected = trace_integral.exp();
    let error = (det - expected).abs();
    LiouvilleCheck { det, expected, error, pass: error <= tol * (1.0 + det.abs()) }
}

/// Multipliers `ρ`, exponents `μ = log ρ / T` on the principal branch, and
/// the product law `Π ρ = exp ∫₀ᵀ trace A`.
///
/// Exponents are only defined modulo `i 2π/T = iω`; they are reported as
/// computed, never shifted.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub multipliers: Vec<Complex64>,
    pub exponents: Vec<Complex64>,
    /// Spacing `ω` of the exponent ambiguity along the imaginary axis.
    pub exponent_ambiguity: f64,
    pub product: Complex64,
    pub expected_product: f64,
    pub product_check: bool,
}

pub fn characteristic_spectrum(m: &DMatrix<f64>, omega: f64, trace_integral: f64, tol: f64) -> SpectralReport {
    let t = period(omega);
    let multipliers = linalg::eigenvalues(m);
    let exponents = multipliers.iter().map(|r| r.ln() / t).collect();
    let product = multipliers.iter().product::<Complex64>();
    let expected_product = trace_integral.exp();
    let product_check = (product - expected_product).norm() <= tol * (1.0 + expected_product.abs());
    SpectralReport { multipliers, exponents, exponent_ambiguity: omega, product, expected_product, product_check }
}

pub fn matrix_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    linalg::expm(m)
}

pub fn matrix_log_real(m: &DMatrix<f64>) -> Result<DMatrix<f64>, MonodromyError> {
    Ok(linalg::logm_real(m)?)
}

/// Eigenvalues this close to the negative real axis (relative angle) make
/// the principal branch ill-conditioned without being exactly on it.
const BRANCH_TOL: f64 = 1e-6;

/// `Φ(t, 0) = P(t) e^{tR}` from the monodromy matrix, with `P` of period
/// `T` or, when `Φ(T, 0)` has no real logarithm, `2T`.
#[derive(Debug, Clone)]
pub struct MonodromyFactorization {
    pub r: DMatrix<f64>,
    pub period_multiplier: usize,
    /// `P(t + T) = P(t) Y`, `Y² = I`.
    pub y: DMatrix<f64>,
    /// `(t, P(t))` over `[0, period_multiplier · T]`.
    pub p_samples: Vec<(f64, DMatrix<f64>)>,
    pub monodromy: DMatrix<f64>,
    /// Largest deviation of `P(t + T) = P(t) e^{tR} P(T) e^{−tR}` on the grid.
    pub montagnier_error: f64,
}

/// Real logarithm of `m / T`, falling back to `log(m²) / 2T`.
pub fn factorize_monodromy(m: &DMatrix<f64>, omega: f64) -> Result<(DMatrix<f64>, usize, DMatrix<f64>), MonodromyError> {
    let t = period(omega);
    let n = m.nrows();
    let scale = linalg::max_abs(m).max(1e-300);
    for ev in linalg::eigenvalues(m) {
        if ev.norm() <= 1e-14 * scale {
            return Err(MonodromyError::SingularMonodromy);
        }
        let angle = ev.im.abs() / ev.norm();
        if ev.re < 0.0 && angle > 1e-10 && angle < BRANCH_TOL {
            return Err(MonodromyError::LogBranchAmbiguity(ev));
        }
    }
    match linalg::logm_real(m) {
        Ok(l) => Ok((l / t, 1, DMatrix::identity(n, n))),
        Err(LinalgError::NegativeRealEigenvalue(_)) => {
            let m2 = m * m;
            let l = linalg::logm_real(&m2).map_err(|e| match e {
                LinalgError::NegativeRealEigenvalue(z) => MonodromyError::LogBranchAmbiguity(z),
                other => other.into(),
            })?;
            let r = l / (2.0 * t);
            let y = nearest_involution(&(m * linalg::expm(&(&r * -t))));
            Ok((r, 2, y))
        }
        Err(e) => Err(e.into()),
    }
}

/// Newton iteration for the matrix sign function, which converges to an
/// involution when started close to one.
fn nearest_involution(y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = y.nrows();
    let id = DMatrix::identity(n, n);
    if linalg::max_abs(&(y * y - &id)) > 1e-6 {
        return y.clone();
    }
    let mut x = y.clone();
    for _ in 0..8 {
        let Some(inv) = x.clone().try_inverse() else { break };
        x = (&x + inv) * 0.5;
    }
    x
}

/// Samples per period used for `P(t)`.
const P_SAMPLES: usize = 32;

pub fn log_factorize(a: &Evaluator, omega: f64, steps: usize) -> Result<MonodromyFactorization, MonodromyError> {
    let t = period(omega);
    let per_sample = (steps / P_SAMPLES).max(1);
    let m = integrate_transition(a, omega, 0.0, t, per_sample * P_SAMPLES).value;
    let (r, mult, y) = factorize_monodromy(&m, omega)?;
    let grid = integrate_grid(a, omega, 0.0, 2.0 * t, 2 * P_SAMPLES, per_sample);
    let p_samples: Vec<(f64, DMatrix<f64>)> =
        grid.iter().map(|(s, phi)| (*s, phi * linalg::expm(&(&r * -*s)))).collect();
    let p_t = &p_samples[P_SAMPLES].1;
    let mut montagnier_error: f64 = 0.0;
    for k in 0..=P_SAMPLES {
        let (s, p) = &p_samples[k];
        let rhs = p * linalg::expm(&(&r * *s)) * p_t * linalg::expm(&(&r * -*s));
        let err = linalg::max_abs(&(&p_samples[k + P_SAMPLES].1 - rhs)) / (1.0 + linalg::max_abs(p));
        montagnier_error = montagnier_error.max(err);
    }
    let keep = mult * P_SAMPLES + 1;
    Ok(MonodromyFactorization {
        r,
        period_multiplier: mult,
        y,
        p_samples: p_samples.into_iter().take(keep).collect(),
        monodromy: m,
        montagnier_error,
    })
}

/// `Φ(t, t₀) = P(t) e^{(t−t₀)R} P⁻¹(t₀)` from a factor pair, including any
/// trace-shift factor.
pub fn reconstruct_phi<T: Scalar>(
    sol: &FloquetSolution<T>,
    omega: f64,
    t: f64,
    t0: f64,
) -> Result<TransitionMatrix, MonodromyError> {
    let value = sol.phi(omega, t, t0).ok_or(MonodromyError::SingularP)?;
    Ok(TransitionMatrix { value, t0, t1: t, method: Method::FloquetReconstructed })
}
