//! Real canonical form of the zero-frequency matrix `A(t|ω=0)`.

use num::complex::Complex64;

use super::FloquetError;
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::{rationalize, Scalar};
use crate::trigmat::TrigMatrix;

/// Result of [`canonicalize_at_zero`]: `J = U⁻¹ A(t|ω=0) U` and the conjugated
/// series `U⁻¹ A U`.
#[derive(Clone, Debug)]
pub struct Canonical<T: Scalar> {
    pub u: Mat<T>,
    pub j: Mat<T>,
    pub a: TrigMatrix<T>,
}

const CLUSTER_TOL: f64 = 1e-6;
const MAX_DEN: i64 = 1_000_000;

/// Brings `A(t|ω=0)` to real Jordan form.
///
/// Real eigenvalues get Jordan chains `[N^{j−1}v, …, Nv, v]` with
/// `N = A₀ − λI`; heads are taken from the echelon nullspace basis of `N^j`
/// in order. A simple complex pair `α ± iβ` (β > 0) gets the columns `[x, w]`
/// with `w = (αx − A₀x)/β`, giving the block `[[α, β], [−β, α]]`.
///
/// On rationals the eigenvalues are recovered exactly (rationalized and
/// checked against the characteristic polynomial). Repeated complex pairs,
/// irrational eigenvalues, and repeated eigenvalues on floats are reported
/// as [`FloquetError::CanonicalFormUnreliable`].
pub fn canonicalize_at_zero<T: Scalar>(a: &TrigMatrix<T>) -> Result<Canonical<T>, FloquetError> {
    let a0 = a.at_omega_zero();
    let n = a0.rows();
    if is_real_canonical(&a0) {
        return Ok(Canonical { u: Mat::identity(n), j: a0, a: a.clone() });
    }
    let ev = linalg::eigenvalues(&a0.to_dmatrix());
    let charp = a0.char_poly();
    let scale = a0.max_abs().max(1.0);
    let spectrum = if T::EXACT { exact_spectrum(&charp)? } else { linalg::cluster(&ev, CLUSTER_TOL) };
    let mut columns: Vec<Vec<T>> = Vec::with_capacity(n);
    for (lam, mult) in spectrum {
        if lam.im < -CLUSTER_TOL * (1.0 + lam.norm()) {
            continue;
        }
        let is_real = lam.im.abs() <= CLUSTER_TOL * (1.0 + lam.norm());
        if is_real {
            let l = exact_value(lam.re, scale)?;
            if T::EXACT && !horner(&charp, &l).is_zero() {
                return Err(FloquetError::CanonicalFormUnreliable);
            }
            if !T::EXACT && mult > 1 {
                return Err(FloquetError::CanonicalFormUnreliable);
            }
            columns.extend(jordan_chains(&a0, &l, mult)?);
        } else {
            if mult > 1 {
                return Err(FloquetError::CanonicalFormUnreliable);
            }
            let alpha = exact_value(lam.re, scale)?;
            let beta = exact_value(lam.im, scale)?;
            if T::EXACT && !divides_quadratic(&charp, &alpha, &beta) {
                return Err(FloquetError::CanonicalFormUnreliable);
            }
            columns.extend(complex_pair(&a0, &alpha, &beta)?);
        }
    }
    if columns.len() != n {
        return Err(FloquetError::CanonicalFormUnreliable);
    }
    let u = Mat::from_columns(n, &columns);
    let uinv = u.inverse().ok_or(FloquetError::CanonicalFormUnreliable)?;
    let j = &(&uinv * &a0) * &u;
    let conj = a.similarity(&u).ok_or(FloquetError::CanonicalFormUnreliable)?;
    Ok(Canonical { u, j, a: conj })
}

/// Diagonal entries, Jordan ones between equal diagonal entries, and
/// `[[α, β], [−β, α]]` blocks with `β > 0`; nothing else.
fn is_real_canonical<T: Scalar>(m: &Mat<T>) -> bool {
    let n = m.rows();
    let zero = |i: usize, j: usize| m[(i, j)].negligible(m.max_abs());
    let mut allowed = vec![vec![false; n]; n];
    let mut i = 0;
    while i < n {
        allowed[i][i] = true;
        if i + 1 < n && !zero(i + 1, i) {
            let (a, b) = (m[(i, i)].clone(), m[(i, i + 1)].clone());
            let block = (m[(i + 1, i + 1)].clone() - a).negligible(1.0)
                && (m[(i + 1, i)].clone() + b.clone()).negligible(1.0)
                && b.as_f64() > 0.0;
            if !block {
                return false;
            }
            allowed[i][i + 1] = true;
            allowed[i + 1][i] = true;
            allowed[i + 1][i + 1] = true;
            i += 2;
            continue;
        }
        if i + 1 < n && !zero(i, i + 1) {
            let one = (m[(i, i + 1)].clone() - T::one()).negligible(1.0);
            let same = (m[(i, i)].clone() - m[(i + 1, i + 1)].clone()).negligible(1.0);
            if !(one && same) {
                return false;
            }
            allowed[i][i + 1] = true;
        }
        i += 1;
    }
    (0..n).all(|r| (0..n).all(|c| allowed[r][c] || zero(r, c)))
}

fn exact_value<T: Scalar>(x: f64, scale: f64) -> Result<T, FloquetError> {
    if !T::EXACT {
        return Ok(T::of_f64(x));
    }
    // snap tiny values to zero before rationalizing
    let x = if x.abs() <= 1e-9 * scale { 0.0 } else { x };
    rationalize(x, MAX_DEN, 1e-8).map(|r| T::of_rational(&r)).ok_or(FloquetError::CanonicalFormUnreliable)
}

/// `c_0 + c_1 x + … + c_n x^n` at `x`.
fn horner<T: Scalar>(coeffs: &[T], x: &T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Quotient and remainder of `num / den`, coefficients lowest degree first.
fn poly_divrem<T: Scalar>(num: &[T], den: &[T]) -> (Vec<T>, Vec<T>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![T::zero()], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![T::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone() / lead.clone();
        for (i, d) in den.iter().enumerate() {
            let v = rem[k + i].clone() - c.clone() * d.clone();
            rem[k + i] = v;
        }
        quot[k] = c;
    }
    rem.truncate(dd.max(1));
    (quot, rem)
}

fn trim<T: Scalar>(mut p: Vec<T>) -> Vec<T> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Distinct roots of the square-free part of `charp` (exact arithmetic),
/// each with its multiplicity in `charp`.
fn exact_spectrum<T: Scalar>(charp: &[T]) -> Result<Vec<(Complex64, usize)>, FloquetError> {
    let deriv: Vec<T> = (1..charp.len()).map(|k| T::int(k as i64) * charp[k].clone()).collect();
    let (mut a, mut b) = (trim(charp.to_vec()), trim(deriv));
    while !(b.len() == 1 && b[0].is_zero()) {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = trim(r);
    }
    let (square_free, _) = poly_divrem(charp, &a);
    let d = square_free.len() - 1;
    let lead = square_free[d].clone();
    let companion = Mat::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -(square_free[i].clone() / lead.clone())
        } else if i == j + 1 {
            T::one()
        } else {
            T::zero()
        }
    });
    let roots = linalg::eigenvalues(&companion.to_dmatrix());
    let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let mut out = Vec::with_capacity(d);
    for z in roots {
        if z.im < -CLUSTER_TOL * (1.0 + z.norm()) {
            continue;
        }
        let factor = if z.im.abs() <= CLUSTER_TOL * (1.0 + z.norm()) {
            vec![-exact_value::<T>(z.re, scale)?, T::one()]
        } else {
            let (al, be) = (exact_value::<T>(z.re, scale)?, exact_value::<T>(z.im, scale)?);
            vec![al.clone() * al.clone() + be.clone() * be, -(T::int(2) * al), T::one()]
        };
        let mut p = charp.to_vec();
        let mut mult = 0;
        loop {
            let (quot, rem) = poly_divrem(&p, &factor);
            if !rem.iter().all(|c| c.is_zero()) {
                break;
            }
            mult += 1;
            p = quot;
        }
        if mult == 0 {
            return Err(FloquetError::CanonicalFormUnreliable);
        }
        out.push((z, mult));
    }
    Ok(out)
}

/// Whether `x² − 2αx + α² + β²` divides the characteristic polynomial.
fn divides_quadratic<T: Scalar>(charp: &[T], alpha: &T, beta: &T) -> bool {
    let b = -(T::int(2) * alpha.clone());
    let c = alpha.clone() * alpha.clone() + beta.clone() * beta.clone();
    // long division from the top, remainder is what is left in degrees 0, 1
    let mut rem: Vec<T> = charp.to_vec();
    for d in (2..rem.len()).rev() {
        let lead = rem[d].clone();
        rem[d] = T::zero();
        let t1 = rem[d - 1].clone() - lead.clone() * b.clone();
        rem[d - 1] = t1;
        let t2 = rem[d - 2].clone() - lead * c.clone();
        rem[d - 2] = t2;
    }
    rem.iter().all(|v| v.is_zero())
}

fn shifted<T: Scalar>(a0: &Mat<T>, lam: &T) -> Mat<T> {
    let n = a0.rows();
    a0 - &Mat::identity(n).scale(lam)
}

fn apply<T: Scalar>(m: &Mat<T>, v: &[T]) -> Vec<T> {
    (&*m * &Mat::from_columns(m.cols(), &[v.to_vec()])).column(0)
}

fn rank_of<T: Scalar>(rows: usize, vs: &[Vec<T>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        Mat::from_columns(rows, vs).rank()
    }
}

fn jordan_chains<T: Scalar>(a0: &Mat<T>, lam: &T, mult: usize) -> Result<Vec<Vec<T>>, FloquetError> {
    let n = a0.rows();
    let nm = shifted(a0, lam);
    // kernels of N^j until the dimension reaches the multiplicity
    let mut kernels: Vec<Vec<Vec<T>>> = vec![Vec::new()];
    let mut power = Mat::identity(n);
    while kernels.last().map_or(0, |k| k.len()) < mult {
        power = &power * &nm;
        let ker = power.nullspace();
        if ker.len() == kernels.last().map_or(0, |k| k.len()) {
            return Err(FloquetError::CanonicalFormUnreliable);
        }
        kernels.push(ker);
    }
    let top = kernels.len() - 1;
    if kernels[top].len() != mult {
        return Err(FloquetError::CanonicalFormUnreliable);
    }
    // heads[i] = (vector, chain length)
    let mut heads: Vec<(Vec<T>, usize)> = Vec::new();
    for level in (1..=top).rev() {
        let mut span: Vec<Vec<T>> = kernels[level - 1].clone();
        for (h, len) in &heads {
            let mut v = h.clone();
            for _ in 0..(len - level) {
                v = apply(&nm, &v);
            }
            span.push(v);
        }
        let target = kernels[level].len();
        for cand in &kernels[level] {
            if rank_of(n, &span) == target {
                break;
            }
            let before = rank_of(n, &span);
            span.push(cand.clone());
            if rank_of(n, &span) > before {
                heads.push((cand.clone(), level));
            } else {
                span.pop();
            }
        }
    }
    let mut cols = Vec::with_capacity(mult);
    for (h, len) in heads {
        let mut chain = vec![h];
        for _ in 1..len {
            let next = apply(&nm, chain.last().unwrap());
            chain.push(next);
        }
        chain.reverse();
        cols.extend(chain);
    }
    Ok(cols)
}

fn complex_pair<T: Scalar>(a0: &Mat<T>, alpha: &T, beta: &T) -> Result<Vec<Vec<T>>, FloquetError> {
    let n = a0.rows();
    let s = shifted(a0, alpha);
    let q = &(&s * &s) + &Mat::identity(n).scale(&(beta.clone() * beta.clone()));
    let ker = if T::EXACT {
        q.nullspace()
    } else {
        let c = q.to_dmatrix().map(|x| Complex64::new(x, 0.0));
        linalg::smallest_singular_vectors(&c, 2).into_iter().map(|v| v.iter().map(|z| T::of_f64(z.re)).collect()).collect()
    };
    if ker.len() != 2 {
        return Err(FloquetError::CanonicalFormUnreliable);
    }
    let x = ker.into_iter().find(|v| v.iter().any(|e| !e.negligible(1.0))).ok_or(FloquetError::CanonicalFormUnreliable)?;
    let ax = apply(a0, &x);
    let w: Vec<T> = x.iter().zip(&ax).map(|(xi, axi)| (alpha.clone() * xi.clone() - axi.clone()) / beta.clone()).collect();
    Ok(vec![x, w])
}
