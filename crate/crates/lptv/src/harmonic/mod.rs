//! Truncated exponential-form operators: the real block system over
//! `(P_0^re; P_1^re; P_1^im; …)`, block Toeplitz transforms, the harmonic
//! state-space model, harmonic transfer functions, poles and transmission
//! zeros.
//!
//! Complex arithmetic lives here and nowhere else.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::floquet::{block_index, BlockSystem, FloquetSolution};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::trigmat::{ExpTrigMatrix, Parity, TrigMatrix};

pub type CMat = DMatrix<Complex64>;

/// Default harmonic truncation `M` (blocks `l = −M..M`).
pub const DEFAULT_TRUNC: usize = 8;

/// Eigenvectors with at least this share of their norm in the outermost
/// blocks are flagged as truncation artifacts.
pub const EDGE_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarmonicError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("resolvent is singular at s = {0}")]
    ResolventSingular(Complex64),
    #[error("P has no finite-series inverse")]
    SingularP,
    #[error("P is not a finite series at the system frequency")]
    NotFiniteFactor,
    #[error("system pencil is singular for every s")]
    DegeneratePencil,
}

/// Real block matrix acting on `X = (P_0^re; P_1^re; P_1^im; …; P_p^re; P_p^im)`
/// with `M X = X R` equivalent to `A P − Ṗ = P R` for harmonics `0..=p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpBlockSystem<T> {
    pub n: usize,
    pub p: usize,
    pub matrix: Mat<T>,
    /// The imaginary part of the `k = 0` equation, which only vanishes for
    /// real `A`.
    pub zero_row_imag: Mat<T>,
}

/// `blkdiag(I, I, −I, I, −I, …)`, mapping exponential to cosine-sine stacks
/// up to a factor 2.
pub fn exp_to_trig_similarity<T: Scalar>(n: usize, p: usize) -> Mat<T> {
    let mut s = Mat::identity(n * (2 * p + 1));
    for k in 1..=p {
        s.set_block(n * block_index(k, Parity::Sin), n * block_index(k, Parity::Sin), &-&Mat::<T>::identity(n));
    }
    s
}

pub fn assemble_exp_block<T: Scalar>(a: &TrigMatrix<T>, omega: &T, p: usize) -> ExpBlockSystem<T> {
    assert!(a.is_square(), "square A expected");
    let n = a.rows();
    let e = a.to_exponential(omega);
    let (al, be) = (|m: i64| e.re(m), |m: i64| e.im(m));
    let re_col = |l: usize| n * if l == 0 { 0 } else { block_index(l, Parity::Cos) };
    let im_col = |l: usize| n * block_index(l, Parity::Sin);
    let mut m = Mat::zeros(n * (2 * p + 1), n * (2 * p + 1));
    let mut zero_row_imag = Mat::zeros(n, n * (2 * p + 1));
    for k in 0..=p {
        let ki = k as i64;
        let kw = Mat::identity(n).scale(&(omega.clone() * T::int(ki)));
        let re_row = re_col(k);
        // real part of row k
        m.set_block(re_row, 0, &al(ki));
        for l in 1..=p {
            let li = l as i64;
            m.set_block(re_row, re_col(l), &(&al(ki - li) + &al(ki + li)));
            let mut c = &be(ki + li) - &be(ki - li);
            if l == k {
                c = &c + &kw;
            }
            m.set_block(re_row, im_col(l), &c);
        }
        // imaginary part of row k
        let mut imag = Mat::zeros(n, n * (2 * p + 1));
        imag.set_block(0, 0, &be(ki));
        for l in 1..=p {
            let li = l as i64;
            let mut c = &be(ki - li) + &be(ki + li);
            if l == k {
                c = &c - &kw;
            }
            imag.set_block(0, re_col(l), &c);
            imag.set_block(0, im_col(l), &(&al(ki - li) - &al(ki + li)));
        }
        if k == 0 {
            zero_row_imag = imag;
        } else {
            m.set_block(im_col(k), 0, &imag);
        }
    }
    ExpBlockSystem { n, p, matrix: m, zero_row_imag }
}

impl<T: Scalar> ExpBlockSystem<T> {
    /// `S M S⁻¹`, which equals the cosine-sine block system at the same ω.
    pub fn to_trig_form(&self) -> Mat<T> {
        let s = exp_to_trig_similarity::<T>(self.n, self.p);
        &(&s * &self.matrix) * &s
    }
}

/// The cosine-sine block system at a numeric ω, for comparison.
pub fn trig_block<T: Scalar>(a: &TrigMatrix<T>, omega: &T, p: usize) -> Mat<T> {
    BlockSystem::assemble(a, p).at_omega(omega)
}

/// Block `(k, l)` is `A_{k−l}` for `k, l ∈ −M..M`.
pub fn toeplitz_transform(e: &ExpTrigMatrix<f64>, trunc: usize) -> CMat {
    let (r, c) = (e.rows(), e.cols());
    let size = 2 * trunc + 1;
    let coeffs: Vec<CMat> = (-(2 * trunc as i64)..=2 * trunc as i64).map(|m| e.complex(m)).collect();
    let mut out = CMat::zeros(r * size, c * size);
    for k in 0..size {
        for l in 0..size {
            let m = k as i64 - l as i64 + 2 * trunc as i64;
            out.view_mut((k * r, l * c), (r, c)).copy_from(&coeffs[m as usize]);
        }
    }
    out
}

/// `blkdiag(i l ω I_n)`, `l = −M..M`.
pub fn frequency_operator(n: usize, omega: f64, trunc: usize) -> CMat {
    let size = 2 * trunc + 1;
    CMat::from_fn(n * size, n * size, |i, j| {
        if i == j {
            Complex64::new(0.0, (i / n) as f64 * omega - trunc as f64 * omega)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `{𝒜 − 𝒩, ℬ, 𝒞, 𝒟}` truncated to harmonics `−M..M`.
#[derive(Debug, Clone)]
pub struct HarmonicStateSpace {
    pub trunc: usize,
    pub omega: f64,
    pub nx: usize,
    pub nu: usize,
    pub ny: usize,
    pub a: CMat,
    pub n: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
}

impl HarmonicStateSpace {
    pub fn a_minus_n(&self) -> CMat {
        &self.a - &self.n
    }

    /// Row or column offset of block `l` for block size `size`.
    pub fn block(&self, l: i64, size: usize) -> usize {
        (l + self.trunc as i64) as usize * size
    }
}

fn check_dims(a: (usize, usize), b: (usize, usize), c: (usize, usize), d: (usize, usize)) -> Result<(), HarmonicError> {
    let ok = a.0 == a.1 && b.0 == a.0 && c.1 == a.0 && d.0 == c.0 && d.1 == b.1;
    if ok {
        Ok(())
    } else {
        Err(HarmonicError::DimensionMismatch(format!("A {a:?}, B {b:?}, C {c:?}, D {d:?}")))
    }
}

pub fn build_hss(
    a: &TrigMatrix<f64>,
    b: &TrigMatrix<f64>,
    c: &TrigMatrix<f64>,
    d: &TrigMatrix<f64>,
    omega: f64,
    trunc: usize,
) -> Result<HarmonicStateSpace, HarmonicError> {
    check_dims(a.shape(), b.shape(), c.shape(), d.shape())?;
    let t = |m: &TrigMatrix<f64>| toeplitz_transform(&m.to_exponential(&omega), trunc);
    Ok(HarmonicStateSpace {
        trunc,
        omega,
        nx: a.rows(),
        nu: b.cols(),
        ny: c.rows(),
        a: t(a),
        n: frequency_operator(a.rows(), omega, trunc),
        b: t(b),
        c: t(c),
        d: t(d),
    })
}

/// `{ℛ − 𝒩, 𝒫⁻¹ℬ, 𝒞𝒫, 𝒟}` from a Floquet factorization, with `ℛ` block
/// diagonal.
pub fn time_invariant_hss<T: Scalar>(
    sol: &FloquetSolution<T>,
    b: &TrigMatrix<f64>,
    c: &TrigMatrix<f64>,
    d: &TrigMatrix<f64>,
    omega: f64,
    trunc: usize,
) -> Result<HarmonicStateSpace, HarmonicError> {
    if sol.transforms.frequency_divisor != 1 || !sol.transforms.shift.psi1.is_zero() {
        return Err(HarmonicError::NotFiniteFactor);
    }
    let p = sol.p.to_f64().collapse_omega(&omega);
    let r = sol.r.eval_f64(omega);
    let n = p.rows();
    check_dims((n, n), b.shape(), c.shape(), d.shape())?;
    let pinv = p.inverse_if_const_det().map_err(|_| HarmonicError::SingularP)?;
    let mismatch = |e: crate::trigmat::TrigError| HarmonicError::DimensionMismatch(e.to_string());
    let bt = pinv.try_mul(b).map_err(mismatch)?;
    let ct = c.try_mul(&p).map_err(mismatch)?;
    let t = |m: &TrigMatrix<f64>| toeplitz_transform(&m.to_exponential(&omega), trunc);
    let size = 2 * trunc + 1;
    let rc = r.map(|x| Complex64::new(x, 0.0));
    let mut a = CMat::zeros(n * size, n * size);
    for l in 0..size {
        a.view_mut((l * n, l * n), (n, n)).copy_from(&rc);
    }
    Ok(HarmonicStateSpace {
        trunc,
        omega,
        nx: n,
        nu: b.cols(),
        ny: c.rows(),
        a,
        n: frequency_operator(n, omega, trunc),
        b: t(&bt),
        c: t(&ct),
        d: t(d),
    })
}

/// `Ĝ(s) = 𝒞 (sI − (𝒜 − 𝒩))⁻¹ ℬ + 𝒟`.
pub fn htf(hss: &HarmonicStateSpace, s: Complex64) -> Result<CMat, HarmonicError> {
    let dim = hss.a.nrows();
    let lhs = CMat::identity(dim, dim) * s - hss.a_minus_n();
    let scale = lhs.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let lu = lhs.lu();
    let u = lu.u();
    let min_pivot = (0..dim).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if dim > 0 && min_pivot <= 1e-13 * scale {
        return Err(HarmonicError::ResolventSingular(s));
    }
    let x = lu.solve(&hss.b).ok_or(HarmonicError::ResolventSingular(s))?;
    Ok(&hss.c * x + &hss.d)
}

/// [`htf`] at every point, in order.
pub fn htf_grid(hss: &HarmonicStateSpace, points: &[Complex64], exec: Exec) -> Vec<Result<CMat, HarmonicError>> {
    exec.map(points, |&s| htf(hss, s))
}

/// Block `(k, l)` of a block matrix with the given block shape.
pub fn block_of(m: &CMat, hss: &HarmonicStateSpace, k: i64, l: i64, rows: usize, cols: usize) -> CMat {
    m.view((hss.block(k, rows), hss.block(l, cols)), (rows, cols)).into_owned()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub s: Complex64,
    /// Eigenvector mass in the two outermost blocks is below
    /// [`EDGE_MASS_TOL`].
    pub reliable: bool,
}

/// `Im s ∈ (−ω/2, ω/2]`, with the boundary widened by a rounding margin so
/// that exponents of negative multipliers stay on the upper edge.
pub fn in_strip(s: Complex64, omega: f64) -> bool {
    let h = omega / 2.0;
    let eps = 1e-8 * h.max(1.0);
    s.im > -h + eps && s.im <= h + eps
}

fn complex_eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

fn edge_mass(v: &DVector<Complex64>, block: usize) -> f64 {
    let total = v.norm_squared();
    let len = v.len();
    if total == 0.0 || len < 2 * block {
        return 0.0;
    }
    let outer: f64 = v.rows(0, block).norm_squared() + v.rows(len - block, block).norm_squared();
    outer / total
}

fn eigenvector(m: &CMat, lambda: Complex64) -> DVector<Complex64> {
    let dim = m.nrows();
    let shifted = m - CMat::identity(dim, dim) * lambda;
    crate::linalg::smallest_singular_vectors(&shifted, 1).remove(0)
}

/// Eigenvalues of `𝒜 − 𝒩` in the fundamental strip.
pub fn poles(hss: &HarmonicStateSpace) -> Vec<Pole> {
    let m = hss.a_minus_n();
    let mut out: Vec<Pole> = complex_eigenvalues(&m)
        .into_iter()
        .filter(|&s| in_strip(s, hss.omega))
        .map(|s| Pole { s, reliable: edge_mass(&eigenvector(&m, s), hss.nx) < EDGE_MASS_TOL })
        .collect();
    out.sort_by(|a, b| a.s.re.total_cmp(&b.s.re).then(a.s.im.total_cmp(&b.s.im)));
    out
}

/// Finite eigenvalues of `(M, E)` with `M = [[𝒜 − 𝒩, ℬ], [𝒞, 𝒟]]` and
/// `E = blkdiag(I, 0)`, by shift and invert.
fn square_pencil_zeros(m: &CMat, nx_dim: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>, HarmonicError> {
    let dim = m.nrows();
    let e = CMat::from_fn(dim, dim, |i, j| if i == j && i < nx_dim { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for _ in 0..4 {
        let sigma = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
        let lu = (m - &e * sigma).lu();
        let u = lu.u();
        let min_pivot = (0..dim).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if min_pivot <= 1e-11 * scale {
            continue;
        }
        let Some(k) = lu.solve(&e) else { continue };
        let nu_max = complex_eigenvalues(&k).iter().map(|z| z.norm()).fold(0.0, f64::max);
        return Ok(complex_eigenvalues(&k)
            .into_iter()
            .filter(|nu| nu.norm() > 1e-10 * nu_max.max(1e-300))
            .map(|nu| sigma + nu.inv())
            .collect());
    }
    Err(HarmonicError::DegeneratePencil)
}

/// Transmission zeros in the fundamental strip. Non-square systems are
/// squared up by two random projections and the common zeros kept.
pub fn transmission_zeros(hss: &HarmonicStateSpace) -> Result<Vec<Complex64>, HarmonicError> {
    let am = hss.a_minus_n();
    let (nx, nu, ny) = (am.nrows(), hss.b.ncols(), hss.c.nrows());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pencil = |left: &CMat, right: &CMat| {
        let (b, c, d) = (&hss.b * right, left * &hss.c, left * &hss.d * right);
        let k = b.ncols();
        let mut m = CMat::zeros(nx + k, nx + k);
        m.view_mut((0, 0), (nx, nx)).copy_from(&am);
        m.view_mut((0, nx), (nx, k)).copy_from(&b);
        m.view_mut((nx, 0), (k, nx)).copy_from(&c);
        m.view_mut((nx, nx), (k, k)).copy_from(&d);
        m
    };
    let zeros = if nu == ny {
        square_pencil_zeros(&pencil(&CMat::identity(ny, ny), &CMat::identity(nu, nu)), nx, &mut rng)?
    } else {
        let k = nu.min(ny);
        let mut random = |r: usize, c: usize| CMat::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let (l1, r1, l2, r2) = (random(k, ny), random(nu, k), random(k, ny), random(nu, k));
        let first = square_pencil_zeros(&pencil(&l1, &r1), nx, &mut rng)?;
        let second = square_pencil_zeros(&pencil(&l2, &r2), nx, &mut rng)?;
        first.into_iter().filter(|z| second.iter().any(|w| (z - w).norm() <= 1e-6 * (1.0 + z.norm()))).collect()
    };
    let mut out: Vec<Complex64> = zeros.into_iter().filter(|&z| in_strip(z, hss.omega)).collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}
