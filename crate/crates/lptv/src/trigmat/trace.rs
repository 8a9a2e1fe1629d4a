//! Normalized trace `ψ(t) = trace M(t) / n`, its mean and the antiderivative
//! of its periodic part.

use super::{OmegaPoly, Parity, TrigError, TrigMatrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TraceSeries<T: Scalar> {
    /// `trace M(t)` as a 1×1 series.
    pub trace: TrigMatrix<T>,
    /// `ψ = trace / n`.
    pub psi: TrigMatrix<T>,
    /// Mean of `ψ`, a polynomial in ω.
    pub psi0: OmegaPoly<T>,
    /// Zero-mean part `ψ₁ = ψ − ψ₀`.
    pub psi1: TrigMatrix<T>,
    /// `Ψ₁(t) = ∫₀ᵗ ψ₁`.
    pub antiderivative: TraceAntiderivative,
}

/// Closed form of `∫₀ᵗ ψ₁(τ) dτ`.
///
/// For a term `ω^r (a cos(lωt) + b sin(lωt))` the integral is
/// `ω^r t [a sinc(x) + b (1 − cos x)/x]` with `x = lωt`, which carries a
/// `1/ω` factor when `r = 0` and so is not a [`TrigMatrix`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceAntiderivative {
    /// `(r, l, a, b)`
    terms: Vec<(usize, usize, f64, f64)>,
}

impl TraceAntiderivative {
    pub fn zero() -> Self {
        Self::default()
    }

    /// From a zero-mean scalar series. Constant terms are ignored.
    pub fn of_series<T: Scalar>(psi1: &TrigMatrix<T>) -> Self {
        let mut terms = Vec::new();
        for r in 0..=psi1.omega_degree() {
            for l in 1..=psi1.harmonic_bound() {
                let a = psi1.coeff(r, l, Parity::Cos)[(0, 0)].as_f64();
                let b = psi1.coeff(r, l, Parity::Sin)[(0, 0)].as_f64();
                if a != 0.0 || b != 0.0 {
                    terms.push((r, l, a, b));
                }
            }
        }
        TraceAntiderivative { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, omega: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(r, l, a, b)| {
                let x = l as f64 * omega * t;
                omega.powi(r as i32) * t * (a * sinc(x) + b * versinc(x))
            })
            .sum()
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `(1 − cos x)/x`, written through `sin²` to avoid cancellation.
fn versinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        x / 2.0
    } else {
        let s = (x / 2.0).sin();
        2.0 * s * s / x
    }
}

impl<T: Scalar> TrigMatrix<T> {
    pub fn trace_series(&self) -> Result<TraceSeries<T>, TrigError> {
        let trace = self.trace()?;
        let psi = trace.scale(&(T::one() / T::int(self.rows() as i64)));
        let avg = psi.average()?;
        let psi0 = OmegaPoly::new(avg.slices().iter().map(|s| s[(0, 0)].clone()).collect());
        let psi1 = &psi - &TrigMatrix::scalar(&psi0);
        let antiderivative = TraceAntiderivative::of_series(&psi1);
        Ok(TraceSeries { trace, psi, psi0, psi1, antiderivative })
    }
}
