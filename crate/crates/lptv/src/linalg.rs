//! Float linear algebra on top of nalgebra: eigenvalues, complex nullspaces,
//! matrix exponential and the real logarithm.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("no real logarithm: eigenvalue {0} on the negative real axis")]
    NegativeRealEigenvalue(Complex64),
    #[error("iteration did not converge")]
    NoConvergence,
}

/// Eigenvalues sorted by real part, then imaginary part.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<Complex64> = m.clone().complex_eigenvalues().iter().copied().collect();
    sort_complex(&mut ev);
    ev
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of a 2×2 matrix from the closed-form quadratic, exact when the
/// discriminant vanishes.
pub fn eigenvalues_2x2(m: &DMatrix<f64>) -> [Complex64; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = tr * tr / 4.0 - det;
    let h = tr / 2.0;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [Complex64::new(h - s, 0.0), Complex64::new(h + s, 0.0)]
    } else {
        let s = (-disc).sqrt();
        [Complex64::new(h, -s), Complex64::new(h, s)]
    }
}

/// Groups eigenvalues lying within `tol·(1 + |λ|)` of a cluster's first
/// member. Returns the cluster means and sizes in order of first appearance.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, Complex64, usize)> = Vec::new();
    for &v in values {
        match groups.iter_mut().find(|(first, _, _)| (v - *first).norm() <= tol * (1.0 + first.norm())) {
            Some(g) => {
                g.1 += v;
                g.2 += 1;
            }
            None => groups.push((v, v, 1)),
        }
    }
    groups.into_iter().map(|(_, sum, k)| (sum / k as f64, k)).collect()
}

/// The `k` right singular vectors with the smallest singular values.
pub fn smallest_singular_vectors(m: &DMatrix<Complex64>, k: usize) -> Vec<DVector<Complex64>> {
    let (rows, cols) = m.shape();
    let mut sq = DMatrix::zeros(rows.max(cols), cols);
    sq.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    order.into_iter().take(k).map(|i| vt.row(i).adjoint().into_owned()).collect()
}

/// Real counterpart of [`smallest_singular_vectors`].
pub fn smallest_real_singular_vectors(m: &DMatrix<f64>, k: usize) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    let mut sq = DMatrix::zeros(rows.max(cols), cols);
    sq.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    order.into_iter().take(k).map(|i| vt.row(i).transpose().into_owned()).collect()
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Orthonormal basis of the right nullspace, from the singular values below
/// `rel_tol · σ_max`.
pub fn complex_nullspace(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let (rows, cols) = m.shape();
    // pad to square so the SVD returns a full right basis
    let mut sq = DMatrix::zeros(rows.max(cols), cols);
    sq.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = rel_tol * smax.max(1.0);
    (0..cols)
        .filter(|&i| svd.singular_values[i] <= thresh)
        .map(|i| vt.row(i).adjoint().into_owned())
        .collect()
}

/// Real nullspace via SVD.
pub fn real_nullspace(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    let mut sq = DMatrix::zeros(rows.max(cols), cols);
    sq.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = rel_tol * smax.max(1.0);
    (0..cols)
        .filter(|&i| svd.singular_values[i] <= thresh)
        .map(|i| vt.row(i).transpose().into_owned())
        .collect()
}

/// Numerical rank with a relative singular-value threshold.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_tol * smax.max(1.0)).count()
}

pub fn norm1(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let theta13 = 5.371920351148152;
    let norm = norm1(a);
    let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Principal square root by the product form of the Denman-Beavers
/// iteration.
fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>, LinalgError> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut m = a.clone();
    let mut y = a.clone();
    for _ in 0..100 {
        let minv = m.clone().try_inverse().ok_or(LinalgError::Singular)?;
        let next_y = &y * (&id + &minv) * 0.5;
        let next_m = (&id * 2.0 + &m + &minv) * 0.25;
        let delta = max_abs(&(&next_y - &y)) / max_abs(&next_y).max(1e-300);
        y = next_y;
        m = next_m;
        if delta < 1e-15 {
            return Ok(y);
        }
    }
    if max_abs(&(&m - &id)) < 1e-10 {
        Ok(y)
    } else {
        Err(LinalgError::NoConvergence)
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]` via Golub-Welsch.
fn gauss_legendre_unit(m: usize) -> Vec<(f64, f64)> {
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = jac.symmetric_eigen();
    let mut nodes: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            ((x + 1.0) / 2.0, w / 2.0)
        })
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

/// Principal real logarithm by inverse scaling and squaring.
///
/// Fails when an eigenvalue lies on the closed negative real axis within
/// `1e-10` relative tolerance, or at zero.
pub fn logm_real(a: &DMatrix<f64>) -> Result<DMatrix<f64>, LinalgError> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let scale = max_abs(a).max(1e-300);
    for ev in eigenvalues(a) {
        if ev.norm() <= 1e-14 * scale {
            return Err(LinalgError::Singular);
        }
        if ev.re < 0.0 && ev.im.abs() <= 1e-10 * ev.norm() {
            return Err(LinalgError::NegativeRealEigenvalue(ev));
        }
    }
    let mut x = a.clone();
    let mut k = 0;
    while max_abs(&(&x - &id)) > 0.25 {
        x = sqrtm(&x)?;
        k += 1;
        if k > 60 {
            return Err(LinalgError::NoConvergence);
        }
    }
    // log(I + Y) = Σ w_j Y (I + x_j Y)⁻¹
    let y = &x - &id;
    let mut acc = DMatrix::zeros(n, n);
    for (node, w) in gauss_legendre_unit(12) {
        let den = &id + &y * node;
        let term = den.lu().solve(&y).ok_or(LinalgError::Singular)?;
        acc += term * w;
    }
    Ok(acc * 2f64.powi(k))
}
