//! Search for `(P, R)` with `P` a finite trigonometric polynomial whose
//! coefficients do not depend on ω.
//!
//! With `P(t|ω=0) = I` the zero-frequency equation forces `R^{0} = A(t|ω=0)`,
//! so the `ω⁰` slice `Ã^{0}X = X R^{0}` is linear in the stacked unknowns `X`.
//! When it pins `X` down, the remaining slices give `R^{r} = S Ã^{r} X`.
//! Otherwise `X` spans an invariant subspace of `Ã(ω*)` at a generic `ω*`,
//! and unions of its generalized eigenspaces are tried in turn.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use super::block::{unstack, BlockSystem};
use super::canon::canonicalize_at_zero;
use super::{residual, shift_trace, FloquetError, FloquetSolution, Transforms};
use crate::exec::Exec;
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::{rationalize, Scalar};
use crate::trigmat::{OmegaPolyMatrix, TrigError, TrigMatrix};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// First harmonic count to try; default `⌈L/n⌉`.
    pub p_hint: Option<usize>,
    /// Last harmonic count to try; default `L` (after re-indexing).
    pub p_max: Option<usize>,
    pub exec: Exec,
    /// Conjugate `A` so that `A(t|ω=0)` is in real Jordan form first.
    pub canonicalize: bool,
    /// Float residual tolerance relative to the size of `A`.
    pub residual_tol: f64,
    /// Denominator bound when snapping float eigenvectors to rationals.
    pub max_denominator: i64,
    /// Generic frequency at which invariant subspaces are computed.
    pub sample_omega: f64,
    pub max_candidates: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            p_hint: None,
            p_max: None,
            exec: Exec::default(),
            canonicalize: true,
            residual_tol: 1e-9,
            max_denominator: 1_000_000,
            sample_omega: 0.731_648_203_912_7,
            max_candidates: 20_000,
        }
    }
}

/// Finds a factor pair of `A`.
///
/// Pipeline: remove the trace, bring `A(t|ω=0)` to real Jordan form, re-index
/// single-harmonic inputs to half frequency, then try `p` harmonics for
/// `p = p_hint..=p_max`. Every accepted `(P, R)` has zero residual, constant
/// nonzero `det P` and traceless `R^{r}` before the shift is undone.
pub fn solve<T: Scalar>(a: &TrigMatrix<T>, opts: &SolveOptions) -> Result<FloquetSolution<T>, FloquetError> {
    if !a.is_square() {
        return Err(TrigError::NotSquare(a.rows(), a.cols()).into());
    }
    let n = a.rows();
    let (shifted, shift) = shift_trace(a)?;
    let (u, canon) = if opts.canonicalize {
        match canonicalize_at_zero(&shifted) {
            Ok(c) if c.u != Mat::identity(n) => (Some(c.u), c.a),
            _ => (None, shifted.clone()),
        }
    } else {
        (None, shifted.clone())
    };
    let divisor = if canon.harmonic_bound() == 1 { 2 } else { 1 };
    let work = canon.to_subharmonic(divisor);
    let l = work.harmonic_bound();
    let p_start = opts.p_hint.unwrap_or(l.div_ceil(n));
    let p_max = opts.p_max.unwrap_or(l).max(p_start);

    let found = (p_start..=p_max).find_map(|p| solve_at_p(&work, p, opts));
    let (p_hat, r_hat) = found.ok_or(FloquetError::NoSolutionWithinPMax { p_max })?;

    // undo the re-indexing where P only uses even harmonics
    let mut frequency_divisor = divisor;
    let mut p_mat = p_hat;
    if divisor > 1 {
        if let Some(folded) = p_mat.from_subharmonic(divisor) {
            p_mat = folded;
            frequency_divisor = 1;
        }
    }
    let d = divisor as i64;
    let r_slices = r_hat.slices().iter().enumerate().map(|(k, s)| s.scale(&(T::one() / T::int(d.pow(k as u32))))).collect();
    let mut r_mat = OmegaPolyMatrix::from_slices(n, r_slices);

    if let Some(u) = &u {
        let uinv = u.inverse().ok_or(FloquetError::CanonicalFormUnreliable)?;
        p_mat = p_mat.similarity(&uinv).ok_or(FloquetError::CanonicalFormUnreliable)?;
        r_mat = r_mat.similarity(&uinv).ok_or(FloquetError::CanonicalFormUnreliable)?;
    }
    let det = p_mat.determinant()?;
    let det_p = det.as_omega_poly().ok_or(TrigError::NonConstantDeterminant)?;
    let transforms = Transforms {
        canonical_basis: u,
        shift: super::TraceShift::zero(),
        frequency_divisor,
        identity_at_zero: true,
    };
    let sol = FloquetSolution { harmonics: p_mat.harmonic_bound(), p: p_mat, r: r_mat, det_p, transforms, residual_norm: 0.0 };
    let mut sol = super::unshift(sol, &shift);
    sol.residual_norm = sol.residual(a)?.max_abs();
    Ok(sol)
}

/// A verified `(P, R)` for the traceless, canonical, re-indexed matrix.
fn solve_at_p<T: Scalar>(a: &TrigMatrix<T>, p: usize, opts: &SolveOptions) -> Option<(TrigMatrix<T>, OmegaPolyMatrix<T>)> {
    let sys = BlockSystem::assemble_tall(a, p);
    match linear_stage(&sys, a) {
        Linear::Unique(x) => accept(a, &sys, x, opts),
        Linear::Inconsistent => None,
        Linear::Underdetermined => eigen_stage(a, &sys, opts),
    }
}

enum Linear<T> {
    Unique(Mat<T>),
    Inconsistent,
    Underdetermined,
}

/// Solves `Ã^{0}X − [X; 0]A₀ = 0`, `S X = I` for `X` by elimination on the
/// vectorized system.
fn linear_stage<T: Scalar>(sys: &BlockSystem<T>, a: &TrigMatrix<T>) -> Linear<T> {
    let n = sys.n();
    let (nu, ne) = (sys.unknown_rows(), sys.equation_rows());
    let a0 = a.at_omega_zero();
    let mut embed = Mat::zeros(ne, nu);
    embed.set_block(0, 0, &Mat::identity(nu));
    let lhs = &Mat::identity(n).kron(&sys.slice(0)) - &a0.transpose().kron(&embed);
    let cons = Mat::identity(n).kron(&sys.selector());
    let unknowns = n * nu;
    let mut aug = Mat::zeros(n * ne + n * n, unknowns + 1);
    aug.set_block(0, 0, &lhs);
    aug.set_block(n * ne, 0, &cons);
    for j in 0..n {
        aug[(n * ne + j * n + j, unknowns)] = T::one();
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&unknowns) {
        return Linear::Inconsistent;
    }
    if pivots.len() < unknowns {
        return Linear::Underdetermined;
    }
    let vec: Vec<T> = (0..unknowns).map(|i| red[(i, unknowns)].clone()).collect();
    Linear::Unique(Mat::from_fn(nu, n, |i, j| vec[j * nu + i].clone()))
}

/// `R^{r} = S (Ã^{r} X)_{top}` for every slice.
fn r_slices<T: Scalar>(sys: &BlockSystem<T>, x: &Mat<T>) -> Vec<Mat<T>> {
    let (n, nu) = (sys.n(), sys.unknown_rows());
    let s = sys.selector();
    sys.slices().iter().map(|sl| &s * &(sl * x).block(0, 0, nu, n)).collect()
}

/// Full verification of a stacked candidate.
fn accept<T: Scalar>(
    a: &TrigMatrix<T>,
    sys: &BlockSystem<T>,
    x: Mat<T>,
    opts: &SolveOptions,
) -> Option<(TrigMatrix<T>, OmegaPolyMatrix<T>)> {
    let n = sys.n();
    let rs = r_slices(sys, &x);
    let scale = a.max_abs().max(1.0) * x.max_abs().max(1.0);
    let tol = if T::EXACT { 0.0 } else { opts.residual_tol * scale };
    let small = |m: &Mat<T>| if T::EXACT { m.is_zero() } else { m.max_abs() <= tol };
    if !sys.residuals(&x, &rs).iter().all(small) {
        return None;
    }
    if !rs.iter().all(|s| if T::EXACT { s.trace().is_zero() } else { s.trace().magnitude() <= tol }) {
        return None;
    }
    let p = unstack(&x, n);
    let r = OmegaPolyMatrix::from_slices(n, rs);
    let det = p.determinant().ok()?;
    let det_scale = p.max_abs().max(1.0).powi(n as i32);
    if !det.is_constant() {
        let varying = det.terms().filter(|(_, l, _, _)| *l > 0).all(|(_, _, _, c)| c[(0, 0)].negligible(det_scale));
        if T::EXACT || !varying {
            return None;
        }
    }
    if det.even(0, 0)[(0, 0)].negligible(det_scale) {
        return None;
    }
    let res = residual(a, &p, &r).ok()?;
    let ok = if T::EXACT { res.is_zero() } else { res.max_abs() <= tol };
    ok.then_some((p, r))
}

/// An invariant subspace piece: a real generalized eigenspace or the real
/// span of a conjugate pair's.
struct Unit {
    basis: Vec<DVector<f64>>,
    /// Sum of eigenvalues with multiplicity (real for conjugate pairs).
    trace: f64,
    weight: f64,
}

fn eigen_units(m: &DMatrix<f64>) -> Vec<Unit> {
    let size = m.nrows();
    let ev = linalg::eigenvalues(m);
    let tol = 1e-6;
    let mut units = Vec::new();
    for (lam, mult) in linalg::cluster(&ev, tol) {
        let real = lam.im.abs() <= tol * (1.0 + lam.norm());
        if real {
            let shifted = m - DMatrix::identity(size, size) * lam.re;
            let power = (1..mult).fold(shifted.clone(), |acc, _| &acc * &shifted);
            let basis = linalg::smallest_real_singular_vectors(&power, mult);
            units.push(Unit { basis, trace: lam.re * mult as f64, weight: lam.re.abs() * mult as f64 });
        } else if lam.im > 0.0 {
            let shifted = linalg::to_complex(m) - DMatrix::identity(size, size) * lam;
            let power = (1..mult).fold(shifted.clone(), |acc, _| &acc * &shifted);
            let vs = linalg::smallest_singular_vectors(&power, mult);
            let mut basis = Vec::with_capacity(2 * mult);
            for v in vs {
                basis.push(v.map(|z: Complex64| z.re));
                basis.push(v.map(|z: Complex64| z.im));
            }
            units.push(Unit { basis, trace: 2.0 * lam.re * mult as f64, weight: 2.0 * lam.norm() * mult as f64 });
        }
    }
    units
}

/// Index sets of units whose dimensions sum to `n` and whose eigenvalues sum
/// to zero, ordered by total `|λ|` then lexicographically.
fn enumerate_subsets(units: &[Unit], n: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(units: &[Unit], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..units.len() {
            let d = units[i].basis.len();
            if d <= left {
                cur.push(i);
                rec(units, i + 1, left - d, cur, out, cap);
                cur.pop();
            }
        }
    }
    let mut all = Vec::new();
    rec(units, 0, n, &mut Vec::new(), &mut all, cap.saturating_mul(4));
    let scale: f64 = 1.0 + units.iter().map(|u| u.weight).sum::<f64>();
    all.retain(|s| s.iter().map(|&i| units[i].trace).sum::<f64>().abs() <= 1e-6 * scale);
    let weight = |s: &Vec<usize>| s.iter().map(|&i| units[i].weight).sum::<f64>();
    all.sort_by(|a, b| weight(a).total_cmp(&weight(b)).then_with(|| a.cmp(b)));
    all.truncate(cap);
    all
}

fn eigen_stage<T: Scalar>(
    a: &TrigMatrix<T>,
    sys: &BlockSystem<T>,
    opts: &SolveOptions,
) -> Option<(TrigMatrix<T>, OmegaPolyMatrix<T>)> {
    let (n, nu) = (sys.n(), sys.unknown_rows());
    let w = opts.sample_omega;
    let mut m = DMatrix::<f64>::zeros(nu, nu);
    for (r, sl) in sys.slices().iter().enumerate() {
        m += sl.to_dmatrix().view((0, 0), (nu, nu)) * w.powi(r as i32);
    }
    let units = eigen_units(&m);
    let subsets = enumerate_subsets(&units, n, opts.max_candidates);
    let s = sys.selector().to_dmatrix();
    let float_slices: Vec<DMatrix<f64>> = sys.slices().iter().map(|sl| sl.to_dmatrix()).collect();
    opts.exec.find_first(&subsets, |subset| {
        let cols: Vec<DVector<f64>> = subset.iter().flat_map(|&i| units[i].basis.iter().cloned()).collect();
        let v = DMatrix::from_columns(&cols);
        let sv = &s * &v;
        if linalg::rank(&sv, 1e-9) < n {
            return None;
        }
        let x = &v * sv.try_inverse()?;
        if !float_prefilter(&float_slices, &s, &x) {
            return None;
        }
        let xt = snap::<T>(&x, opts.max_denominator)?;
        accept(a, sys, xt, opts)
    })
}

/// Residual of the float candidate across all slices, relative `1e-6`.
fn float_prefilter(slices: &[DMatrix<f64>], s: &DMatrix<f64>, x: &DMatrix<f64>) -> bool {
    let nu = x.nrows();
    let scale = 1.0 + linalg::max_abs(x);
    slices.iter().all(|sl| {
        let ax = sl * x;
        let r = s * ax.rows(0, nu);
        let mut res = ax.clone();
        let top = x * &r;
        let mut view = res.rows_mut(0, nu);
        view -= top;
        linalg::max_abs(&res) <= 1e-6 * scale * (1.0 + linalg::max_abs(sl))
    })
}

/// Rational snapping of a float candidate; identity on floats.
fn snap<T: Scalar>(x: &DMatrix<f64>, max_den: i64) -> Option<Mat<T>> {
    if !T::EXACT {
        return Some(Mat::from_dmatrix(x));
    }
    let scale = linalg::max_abs(x).max(1.0);
    let mut out = Mat::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            let v = if x[(i, j)].abs() <= 1e-9 * scale { 0.0 } else { x[(i, j)] };
            out[(i, j)] = T::of_rational(&rationalize(v, max_den, 1e-7)?);
        }
    }
    Some(out)
}
