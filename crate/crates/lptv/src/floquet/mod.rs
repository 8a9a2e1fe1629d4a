//! Floquet factorizations `Φ(t, t₀) = P(t) e^{(t−t₀)R} P⁻¹(t₀)` with `P`
//! periodic and `R` a polynomial in ω.
//!
//! The factor pair satisfies `A·P − Ṗ = P·R`. [`solve`] finds `(P, R)` with
//! finitely many harmonics by matching Fourier coefficients power by power
//! in ω; the helpers here check, transform and evaluate such pairs.

mod block;
mod canon;
mod solve;

use nalgebra::DMatrix;

use crate::linalg;
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::trigmat::{OmegaPoly, OmegaPolyMatrix, TraceAntiderivative, TrigError, TrigMatrix};

pub use block::{block_index, stack, unstack, zero_row_odd_part, BlockSystem};
pub use canon::{canonicalize_at_zero, Canonical};
pub use solve::{solve, SolveOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FloquetError {
    #[error("no periodic factor with at most {p_max} harmonics")]
    NoSolutionWithinPMax { p_max: usize },
    #[error("P⁻¹(AP − Ṗ) varies with t (deviation {deviation:.3e})")]
    NotConstantInT { deviation: f64 },
    #[error("P is singular")]
    SingularP,
    #[error("real canonical form of A(t|ω=0) could not be determined reliably")]
    CanonicalFormUnreliable,
    #[error("similarity matrix is singular")]
    SingularSimilarity,
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// Scalar split `ψ(t) = ψ₀ + ψ₁(t)` of the normalized trace removed from `A`.
#[derive(Clone, Debug)]
pub struct TraceShift<T: Scalar> {
    pub psi0: OmegaPoly<T>,
    /// Zero-mean periodic part as a 1×1 series.
    pub psi1: TrigMatrix<T>,
    /// `Ψ₁(t) = ∫₀ᵗ ψ₁`.
    pub antiderivative: TraceAntiderivative,
}

impl<T: Scalar> TraceShift<T> {
    pub fn zero() -> Self {
        TraceShift { psi0: OmegaPoly::zero(), psi1: TrigMatrix::zeros(1, 1), antiderivative: TraceAntiderivative::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.psi0.is_zero() && self.psi1.is_zero()
    }

    /// `e^{Ψ₁(t)}`.
    pub fn factor(&self, omega: f64, t: f64) -> f64 {
        self.antiderivative.eval(omega, t).exp()
    }
}

/// Transformations applied while solving, needed to read the result back
/// in the original coordinates.
#[derive(Clone, Debug)]
pub struct Transforms<T: Scalar> {
    /// Constant `U` with `U⁻¹ A(t|ω=0) U` in real Jordan form.
    pub canonical_basis: Option<Mat<T>>,
    pub shift: TraceShift<T>,
    /// `P` is a series in `ω/m` (period `mT`) for `m > 1`.
    pub frequency_divisor: usize,
    /// `P(t|ω=0) = I`.
    pub identity_at_zero: bool,
}

impl<T: Scalar> Default for Transforms<T> {
    fn default() -> Self {
        Transforms { canonical_basis: None, shift: TraceShift::zero(), frequency_divisor: 1, identity_at_zero: false }
    }
}

/// A factor pair `(P, R)`.
///
/// `p` solves `(A − ψ₁I)·P − Ṗ = P·R`; the factor of the original `A` is
/// `e^{Ψ₁(t)} P(t)`, which [`FloquetSolution::p_at`] includes.
#[derive(Clone, Debug)]
pub struct FloquetSolution<T: Scalar> {
    pub p: TrigMatrix<T>,
    pub r: OmegaPolyMatrix<T>,
    /// Harmonic bound of `p` in its own frequency.
    pub harmonics: usize,
    pub det_p: OmegaPoly<T>,
    pub transforms: Transforms<T>,
    /// Largest residual coefficient.
    pub residual_norm: f64,
}

impl<T: Scalar> FloquetSolution<T> {
    /// Wraps a known pair after checking that it solves `A`.
    pub fn from_pair(a: &TrigMatrix<T>, p: TrigMatrix<T>, r: OmegaPolyMatrix<T>) -> Result<Self, FloquetError> {
        let res = residual(a, &p, &r)?;
        let det = p.determinant()?;
        let det_p = det.as_omega_poly().ok_or(TrigError::NonConstantDeterminant)?;
        if det_p.is_zero() {
            return Err(FloquetError::SingularP);
        }
        Ok(FloquetSolution {
            harmonics: p.harmonic_bound(),
            p,
            r,
            det_p,
            transforms: Transforms::default(),
            residual_norm: res.max_abs(),
        })
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    /// The matrix `p` actually solves, in `p`'s own frequency.
    pub fn effective_a(&self, a: &TrigMatrix<T>) -> TrigMatrix<T> {
        let m = self.transforms.frequency_divisor;
        let shifted = a - &scalar_identity(&self.transforms.shift.psi1, a.rows());
        shifted.to_subharmonic(m)
    }

    /// `R` as a polynomial in `ω/m`.
    pub fn r_in_own_frequency(&self) -> OmegaPolyMatrix<T> {
        let m = self.transforms.frequency_divisor as i64;
        let slices = self.r.slices().iter().enumerate().map(|(k, s)| s.scale(&T::int(m.pow(k as u32)))).collect();
        OmegaPolyMatrix::from_slices(self.n(), slices)
    }

    /// `(A − ψ₁I)·P − Ṗ − P·R` in `p`'s own frequency.
    pub fn residual(&self, a: &TrigMatrix<T>) -> Result<TrigMatrix<T>, FloquetError> {
        residual(&self.effective_a(a), &self.p, &self.r_in_own_frequency())
    }

    /// `e^{Ψ₁(t)} P(t)`.
    pub fn p_at(&self, omega: f64, t: f64) -> DMatrix<f64> {
        let m = self.transforms.frequency_divisor as f64;
        self.p.evaluate(omega / m, t) * self.transforms.shift.factor(omega, t)
    }

    pub fn r_at(&self, omega: f64) -> DMatrix<f64> {
        self.r.eval_f64(omega)
    }

    /// `Φ(t, t₀) = P(t) e^{(t−t₀)R} P⁻¹(t₀)`.
    pub fn phi(&self, omega: f64, t: f64, t0: f64) -> Option<DMatrix<f64>> {
        let p0 = self.p_at(omega, t0).try_inverse()?;
        Some(self.p_at(omega, t) * linalg::expm(&(self.r_at(omega) * (t - t0))) * p0)
    }
}

/// `s(t)·I_n` for a 1×1 series `s`.
fn scalar_identity<T: Scalar>(s: &TrigMatrix<T>, n: usize) -> TrigMatrix<T> {
    let grid: Vec<Vec<TrigMatrix<T>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { s.clone() } else { TrigMatrix::zeros(1, 1) }).collect())
        .collect();
    TrigMatrix::from_blocks(&grid)
}

/// `A·P − Ṗ − P·R`.
pub fn residual<T: Scalar>(
    a: &TrigMatrix<T>,
    p: &TrigMatrix<T>,
    r: &OmegaPolyMatrix<T>,
) -> Result<TrigMatrix<T>, FloquetError> {
    let rt = TrigMatrix::from_omega_poly(r);
    let ap = a.try_mul(p)?;
    let pr = p.try_mul(&rt)?;
    Ok(ap.try_sub(&p.differentiate())?.try_sub(&pr)?)
}

/// `R = P⁻¹(AP − Ṗ)` computed symbolically; requires constant `det P`.
pub fn recover_r_exact<T: Scalar>(a: &TrigMatrix<T>, p: &TrigMatrix<T>) -> Result<OmegaPolyMatrix<T>, FloquetError> {
    let pinv = p.inverse_if_const_det().map_err(|e| match e {
        TrigError::SingularDeterminant => FloquetError::SingularP,
        other => FloquetError::Trig(other),
    })?;
    let rhs = pinv.try_mul(&a.try_mul(p)?.try_sub(&p.differentiate())?)?;
    if rhs.harmonic_bound() > 0 {
        return Err(FloquetError::NotConstantInT { deviation: rhs.max_abs() });
    }
    let slices = (0..=rhs.omega_degree()).map(|r| rhs.even(r, 0)).collect();
    Ok(OmegaPolyMatrix::from_slices(p.rows(), slices))
}

/// `R = P⁻¹(AP − Ṗ)` sampled on a `(ω, t)` grid.
///
/// The right-hand side must be constant in `t` to within `1e-8` relative;
/// the per-ω constants are fitted by least squares to a polynomial of degree
/// `≤ deg_ω(A) + 1`.
pub fn recover_r(
    a: &TrigMatrix<f64>,
    p: &TrigMatrix<f64>,
    omega_samples: &[f64],
    t_samples: &[f64],
) -> Result<OmegaPolyMatrix<f64>, FloquetError> {
    let n = p.rows();
    let dp = p.differentiate();
    let degree = (a.omega_degree() + 1).min(omega_samples.len().saturating_sub(1));
    let mut values = Vec::with_capacity(omega_samples.len());
    for &w in omega_samples {
        let mut first: Option<DMatrix<f64>> = None;
        for &t in t_samples {
            let pv = p.evaluate(w, t);
            let pinv = pv.clone().try_inverse().ok_or(FloquetError::SingularP)?;
            let rhs = pinv * (a.evaluate(w, t) * &pv - dp.evaluate(w, t));
            match &first {
                None => first = Some(rhs),
                Some(f) => {
                    let dev = linalg::max_abs(&(&rhs - f));
                    if dev > 1e-8 * (1.0 + linalg::max_abs(f)) {
                        return Err(FloquetError::NotConstantInT { deviation: dev });
                    }
                }
            }
        }
        values.push(first.ok_or(FloquetError::SingularP)?);
    }
    // least-squares Vandermonde fit per entry
    let vand = DMatrix::from_fn(omega_samples.len(), degree + 1, |i, k| omega_samples[i].powi(k as i32));
    let svd = vand.svd(true, true);
    let mut slices = vec![Mat::<f64>::zeros(n, n); degree + 1];
    for i in 0..n {
        for j in 0..n {
            let b = nalgebra::DVector::from_fn(omega_samples.len(), |s, _| values[s][(i, j)]);
            let c = svd.solve(&b, 1e-14).map_err(|_| FloquetError::SingularP)?;
            for (k, slice) in slices.iter_mut().enumerate() {
                slice[(i, j)] = if c[k].abs() < 1e-11 { 0.0 } else { c[k] };
            }
        }
    }
    Ok(OmegaPolyMatrix::from_slices(n, slices))
}

/// `A − ψ(t)I` with `ψ = trace A / n`, and the removed shift.
pub fn shift_trace<T: Scalar>(a: &TrigMatrix<T>) -> Result<(TrigMatrix<T>, TraceShift<T>), FloquetError> {
    let ts = a.trace_series()?;
    let shifted = a - &scalar_identity(&ts.psi, a.rows());
    Ok((shifted, TraceShift { psi0: ts.psi0, psi1: ts.psi1, antiderivative: ts.antiderivative }))
}

/// Moves a solution of the shifted matrix back: `R ← R + ψ₀I`, and `P` gains
/// the factor `e^{Ψ₁(t)}` through the recorded shift.
pub fn unshift<T: Scalar>(mut sol: FloquetSolution<T>, shift: &TraceShift<T>) -> FloquetSolution<T> {
    sol.r = sol.r.add_scalar_poly(&shift.psi0);
    let prev = &sol.transforms.shift;
    sol.transforms.shift = TraceShift {
        psi0: prev.psi0.add(&shift.psi0),
        psi1: &prev.psi1 + &shift.psi1,
        antiderivative: TraceAntiderivative::of_series(&(&prev.psi1 + &shift.psi1)),
    };
    sol
}

/// `P ← P·V`, `R ← V⁻¹RV`.
pub fn similarity_r<T: Scalar>(sol: &FloquetSolution<T>, v: &Mat<T>) -> Result<FloquetSolution<T>, FloquetError> {
    let r = sol.r.similarity(v).ok_or(FloquetError::SingularSimilarity)?;
    let det_v = v.det();
    let det_p = sol.det_p.scale(&det_v);
    Ok(FloquetSolution { p: sol.p.right_mul(v), r, det_p, ..sol.clone() })
}

/// `U⁻¹ A U`.
pub fn similarity_a<T: Scalar>(a: &TrigMatrix<T>, u: &Mat<T>) -> Result<TrigMatrix<T>, FloquetError> {
    a.similarity(u).ok_or(FloquetError::SingularSimilarity)
}

/// Outcome of [`lemma_checks`].
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    /// `trace R = trace(mean A)` as polynomials in ω.
    pub trace_identity: bool,
    /// Largest coefficient of `trace R − trace(mean A)`.
    pub trace_identity_error: f64,
    pub det_constant: bool,
    /// `det P` constant exactly when `trace(A − ψ₁I) − trace R` vanishes.
    pub det_trace_equivalence: bool,
    /// `Φ(t+T, t₀+T) = Φ(t, t₀)` at sampled pairs.
    pub periodicity: bool,
    /// `trace R^{r} = 0` for every `r` after removing `ψ₀`; `None` when no
    /// shift was applied.
    pub traceless_slices: Option<bool>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.trace_identity
            && self.det_constant
            && self.det_trace_equivalence
            && self.periodicity
            && self.traceless_slices.unwrap_or(true)
    }
}

/// Structural checks on a solution of `A`.
pub fn lemma_checks<T: Scalar>(a: &TrigMatrix<T>, sol: &FloquetSolution<T>) -> Result<LemmaReport, FloquetError> {
    let scale = a.max_abs().max(sol.r.max_abs()).max(1.0);
    let tol = if T::EXACT { 0.0 } else { 1e-9 * scale };
    let mean_trace = a.average()?.trace();
    let diff = sol.r.trace().sub(&mean_trace);
    let trace_identity_error = diff.coeffs().iter().map(|c| c.magnitude()).fold(0.0, f64::max);
    let trace_identity = trace_identity_error <= tol;

    let det = sol.p.determinant()?;
    let det_constant = det.is_constant() && !det.is_zero();
    let eff = sol.effective_a(a);
    let tr_eff = eff.trace()?;
    let tr_r = TrigMatrix::scalar(&sol.r_in_own_frequency().trace());
    let mismatch = &tr_eff - &tr_r;
    let traces_match = mismatch.max_abs() <= tol;
    let det_trace_equivalence = det.is_constant() == traces_match;

    let omega = 1.0;
    let period = 2.0 * std::f64::consts::PI * sol.transforms.frequency_divisor as f64 / omega;
    let pairs = [(0.3, 0.0), (1.1, 0.4), (2.5, -0.7), (4.0, 1.9)];
    let mut periodicity = true;
    for (t, t0) in pairs {
        match (sol.phi(omega, t + period, t0 + period), sol.phi(omega, t, t0)) {
            (Some(x), Some(y)) => {
                let err = linalg::max_abs(&(&x - &y));
                if err > 1e-8 * (1.0 + linalg::max_abs(&y)) {
                    periodicity = false;
                }
            }
            _ => periodicity = false,
        }
    }

    let traceless_slices = if sol.transforms.shift.is_zero() {
        None
    } else {
        let shifted = sol.r.add_scalar_poly(&sol.transforms.shift.psi0.neg());
        Some(shifted.slices().iter().all(|s| s.trace().magnitude() <= tol))
    };
    Ok(LemmaReport { trace_identity, trace_identity_error, det_constant, det_trace_equivalence, periodicity, traceless_slices })
}

#[cfg(test)]
mod tests;
