//! Exponential stability from the constant factor `R(ω)`, frequency sweeps
//! and the frequencies where the classification changes.
//!
//! Stability of `ẋ = A(t)x` is never read off `A(t)` itself: frozen-time
//! eigenvalues can all lie in the left half plane while `R` has one in the
//! right.

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::exec::Exec;
use crate::linalg;
use crate::scalar::Scalar;
use crate::trigmat::{OmegaPoly, OmegaPolyMatrix};

/// Eigenvalues with `|Re λ| ≤ MARGINAL_TOL·(1 + |λ|)` count as on the axis.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StabilityError {
    #[error("expected a 2×2 matrix, got {0}×{0}")]
    NotTwoByTwo(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Stable,
    MarginallyStable,
    Unstable,
}

impl StabilityClass {
    pub fn name(self) -> &'static str {
        match self {
            StabilityClass::Stable => "stable",
            StabilityClass::MarginallyStable => "marginal",
            StabilityClass::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    /// Every eigenvalue on the imaginary axis has equal algebraic and
    /// geometric multiplicity. Vacuously true when none is on the axis.
    pub semisimple_on_axis: bool,
}

fn on_axis(z: Complex64, tol: f64) -> bool {
    z.re.abs() <= tol * (1.0 + z.norm())
}

fn eigenvalues_of(m: &DMatrix<f64>) -> Vec<Complex64> {
    if m.nrows() == 2 {
        linalg::eigenvalues_2x2(m).to_vec()
    } else {
        linalg::eigenvalues(m)
    }
}

/// Whether each eigenvalue cluster accepted by `select` has a full
/// eigenspace.
fn semisimple(m: &DMatrix<f64>, ev: &[Complex64], select: impl Fn(Complex64) -> bool) -> bool {
    let n = m.nrows();
    let mc = linalg::to_complex(m);
    linalg::cluster(ev, 1e-6).into_iter().filter(|(z, _)| select(*z)).all(|(z, k)| {
        let shifted = &mc - DMatrix::<Complex64>::identity(n, n) * z;
        linalg::complex_nullspace(&shifted, 1e-8).len() >= k
    })
}

/// Classification of a constant matrix by the real parts of its eigenvalues.
pub fn classify_matrix(r: &DMatrix<f64>, tol: f64) -> StabilityVerdict {
    let eigenvalues = eigenvalues_of(r);
    let max_real_part = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let any_on_axis = eigenvalues.iter().any(|&z| on_axis(z, tol));
    let any_right = eigenvalues.iter().any(|&z| z.re > 0.0 && !on_axis(z, tol));
    let semisimple_on_axis = !any_on_axis || semisimple(r, &eigenvalues, |z| on_axis(z, tol));
    let class = if any_right {
        StabilityClass::Unstable
    } else if !any_on_axis {
        StabilityClass::Stable
    } else if semisimple_on_axis {
        StabilityClass::MarginallyStable
    } else {
        StabilityClass::Unstable
    };
    StabilityVerdict { class, eigenvalues, max_real_part, semisimple_on_axis }
}

/// Classification of `R` evaluated at `omega`.
pub fn classify<T: Scalar>(r: &OmegaPolyMatrix<T>, omega: f64, tol: f64) -> StabilityVerdict {
    classify_matrix(&r.eval_f64(omega), tol)
}

/// Classification from a monodromy matrix: spectral radius below, on, or
/// above the unit circle.
pub fn classify_monodromy(m: &DMatrix<f64>, tol: f64) -> StabilityVerdict {
    let eigenvalues = linalg::eigenvalues(m);
    let rho = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let on_circle = |z: Complex64| (z.norm() - 1.0).abs() <= tol * (1.0 + z.norm());
    let any_on = eigenvalues.iter().any(|&z| on_circle(z));
    let semisimple_on_axis = !any_on || semisimple(m, &eigenvalues, on_circle);
    let class = if rho > 1.0 && !on_circle(Complex64::new(rho, 0.0)) {
        StabilityClass::Unstable
    } else if !any_on {
        StabilityClass::Stable
    } else if semisimple_on_axis {
        StabilityClass::MarginallyStable
    } else {
        StabilityClass::Unstable
    };
    StabilityVerdict { class, eigenvalues, max_real_part: rho.ln(), semisimple_on_axis }
}

/// `trace R(ω)`, `det R(ω)` and the Routh–Hurwitz test for `n = 2`.
#[derive(Debug, Clone)]
pub struct Conditions2x2 {
    pub trace: f64,
    pub det: f64,
    /// `trace < 0 ∧ det > 0`.
    pub stable: bool,
    pub verdict: StabilityVerdict,
}

pub fn conditions_2x2<T: Scalar>(r: &OmegaPolyMatrix<T>, omega: f64) -> Result<Conditions2x2, StabilityError> {
    let (trace, det) = trace_det(r)?;
    let (trace, det) = (trace.eval_f64(omega), det.eval_f64(omega));
    let verdict = classify(r, omega, MARGINAL_TOL);
    Ok(Conditions2x2 { trace, det, stable: trace < 0.0 && det > 0.0, verdict })
}

/// `trace R` and `det R` as polynomials in ω.
pub fn trace_det<T: Scalar>(r: &OmegaPolyMatrix<T>) -> Result<(OmegaPoly<f64>, OmegaPoly<f64>), StabilityError> {
    if r.n() != 2 {
        return Err(StabilityError::NotTwoByTwo(r.n()));
    }
    let rf = r.map(|x| x.as_f64());
    let det = rf.entry(0, 0).mul(&rf.entry(1, 1)).sub(&rf.entry(0, 1).mul(&rf.entry(1, 0)));
    Ok((rf.trace(), det))
}

/// `Δ(ω) = trace² − 4 det`; the eigenvalues are `(trace ± √Δ)/2`.
pub fn discriminant<T: Scalar>(r: &OmegaPolyMatrix<T>) -> Result<OmegaPoly<f64>, StabilityError> {
    let (tr, det) = trace_det(r)?;
    Ok(tr.mul(&tr).sub(&det.scale(&4.0)))
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub omega: f64,
    pub eigenvalues: Vec<Complex64>,
    pub class: StabilityClass,
    /// `Δ(ω)` for 2×2 systems.
    pub discriminant: Option<f64>,
}

/// One row per grid point, in grid order.
pub fn sweep<T: Scalar>(r: &OmegaPolyMatrix<T>, grid: &[f64], exec: Exec) -> Vec<SweepRow> {
    let rf = r.map(|x| x.as_f64());
    let disc = discriminant(&rf).ok();
    exec.map(grid, |&omega| {
        let v = classify(&rf, omega, MARGINAL_TOL);
        SweepRow {
            omega,
            eigenvalues: v.eigenvalues,
            class: v.class,
            discriminant: disc.as_ref().map(|d| d.eval_f64(omega)),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalEvent {
    /// `Δ(ω) = 0`: a double eigenvalue, between a real and a complex pair.
    DiscriminantRoot,
    /// A real eigenvalue passes through zero (`det R = 0`).
    RealCrossing,
    /// A complex pair crosses the imaginary axis (`trace R = 0`, `det R > 0`).
    OscillatoryCrossing,
    /// `max Re λ` changes sign between grid points.
    MaxRealPartCrossing,
}

impl CriticalEvent {
    pub fn name(self) -> &'static str {
        match self {
            CriticalEvent::DiscriminantRoot => "discriminant-root",
            CriticalEvent::RealCrossing => "real-crossing",
            CriticalEvent::OscillatoryCrossing => "oscillatory-crossing",
            CriticalEvent::MaxRealPartCrossing => "max-real-part-crossing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalFrequency {
    pub omega: f64,
    pub event: CriticalEvent,
}

/// Frequencies where the spectrum of `R(ω)` changes character.
///
/// For `n = 2` these are the real roots of `Δ`, `det R` and `trace R` in
/// closed form and `grid` is unused. Otherwise sign changes of `max Re λ`
/// between consecutive grid points are refined by bisection.
pub fn critical_frequencies<T: Scalar>(r: &OmegaPolyMatrix<T>, grid: &[f64]) -> Vec<CriticalFrequency> {
    let rf = r.map(|x| x.as_f64());
    let mut out = match trace_det(&rf) {
        Ok((tr, det)) => {
            let disc = tr.mul(&tr).sub(&det.scale(&4.0));
            let mut out = Vec::new();
            let mut push = |roots: Vec<f64>, event| out.extend(roots.into_iter().map(|omega| CriticalFrequency { omega, event }));
            push(real_roots(&disc), CriticalEvent::DiscriminantRoot);
            push(real_roots(&det), CriticalEvent::RealCrossing);
            push(
                real_roots(&tr).into_iter().filter(|&w| det.eval_f64(w) > 0.0).collect(),
                CriticalEvent::OscillatoryCrossing,
            );
            out
        }
        Err(_) => bracket_crossings(&rf, grid),
    };
    out.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    out
}

fn max_real_part(r: &OmegaPolyMatrix<f64>, omega: f64) -> f64 {
    linalg::eigenvalues(&r.eval_f64(omega)).iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

fn bracket_crossings(r: &OmegaPolyMatrix<f64>, grid: &[f64]) -> Vec<CriticalFrequency> {
    let f = |w: f64| max_real_part(r, w);
    let mut out = Vec::new();
    for pair in grid.windows(2) {
        let (mut lo, mut hi) = (pair[0], pair[1]);
        let (mut flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            out.push(CriticalFrequency { omega: lo, event: CriticalEvent::MaxRealPartCrossing });
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        while (hi - lo).abs() > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push(CriticalFrequency { omega: 0.5 * (lo + hi), event: CriticalEvent::MaxRealPartCrossing });
    }
    if let Some(&last) = grid.last() {
        if grid.len() > 1 && f(last) == 0.0 {
            out.push(CriticalFrequency { omega: last, event: CriticalEvent::MaxRealPartCrossing });
        }
    }
    out
}

/// Real roots of a polynomial, ascending, double roots reported once.
pub fn real_roots(p: &OmegaPoly<f64>) -> Vec<f64> {
    let c = p.coeffs();
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let mut roots = match p.degree() {
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[0], c[1], c[2]),
        d => {
            let lead = c[d];
            let companion = DMatrix::from_fn(d, d, |i, j| {
                if i == 0 {
                    -c[d - 1 - j] / lead
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            linalg::eigenvalues(&companion)
                .into_iter()
                .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
                .map(|z| polish(p, z.re))
                .collect()
        }
    };
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    roots
}

fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let scale = c1 * c1 + (4.0 * c2 * c0).abs();
    if disc < 0.0 {
        // a tangent root with a rounding-negative discriminant is still a root
        if -disc <= 1e-14 * scale {
            return vec![-c1 / (2.0 * c2)];
        }
        return Vec::new();
    }
    // no cancellation between −c1 and ±√disc
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / c2, c0 / q]
}

fn polish(p: &OmegaPoly<f64>, mut x: f64) -> f64 {
    let c = p.coeffs();
    for _ in 0..4 {
        let (mut f, mut df) = (0.0, 0.0);
        for &a in c.iter().rev() {
            df = df * x + f;
            f = f * x + a;
        }
        if df == 0.0 {
            break;
        }
        x -= f / df;
    }
    x
}
