//! Polynomials in the frequency ω and constant matrices with such entries.

use nalgebra::DMatrix;

use crate::mat::Mat;
use crate::scalar::Scalar;

/// `c_0 + c_1 ω + … + c_N ω^N` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> OmegaPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        let scale = coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.negligible(scale)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        OmegaPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn constant(c: T) -> Self {
        OmegaPoly { coeffs: vec![c] }
    }

    /// The monomial ω.
    pub fn omega() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> T {
        self.coeffs.get(r).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, omega: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * omega.clone() + c.clone())
    }

    pub fn eval_f64(&self, omega: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * omega + c.as_f64())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|r| self.coeff(r) + other.coeff(r)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Maps the coefficient field, e.g. rational to float.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> OmegaPoly<U> {
        OmegaPoly::new(self.coeffs.iter().map(f).collect())
    }
}

/// Constant-in-time square matrix whose entries are polynomials in ω,
/// stored as slices `M^{r}` so that `M = Σ ω^r M^{r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaPolyMatrix<T> {
    n: usize,
    slices: Vec<Mat<T>>,
}

impl<T: Scalar> OmegaPolyMatrix<T> {
    /// Builds from `M^{0}, M^{1}, …`. Panics on mismatched or non-square slices.
    pub fn from_slices(n: usize, slices: Vec<Mat<T>>) -> Self {
        for s in &slices {
            assert!(s.rows() == n && s.cols() == n, "slice shape mismatch");
        }
        let mut m = OmegaPolyMatrix { n, slices };
        m.trim();
        m
    }

    pub fn constant(m: Mat<T>) -> Self {
        let n = m.rows();
        Self::from_slices(n, vec![m])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(Mat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Mat::identity(n))
    }

    /// Builds from an entry grid.
    pub fn from_entries(entries: &[Vec<OmegaPoly<T>>]) -> Self {
        let n = entries.len();
        let deg = entries.iter().flatten().map(OmegaPoly::degree).max().unwrap_or(0);
        let slices = (0..=deg)
            .map(|r| Mat::from_fn(n, n, |i, j| entries[i][j].coeff(r)))
            .collect();
        Self::from_slices(n, slices)
    }

    fn trim(&mut self) {
        let scale = self.slices.iter().map(Mat::max_abs).fold(0.0, f64::max);
        while self.slices.len() > 1 && self.slices.last().is_some_and(|s| s.is_negligible(scale)) {
            self.slices.pop();
        }
        if self.slices.is_empty() {
            self.slices.push(Mat::zeros(self.n, self.n));
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slices(&self) -> &[Mat<T>] {
        &self.slices
    }

    /// `M^{r}`, zero beyond the stored degree.
    pub fn slice(&self, r: usize) -> Mat<T> {
        self.slices.get(r).cloned().unwrap_or_else(|| Mat::zeros(self.n, self.n))
    }

    pub fn entry(&self, i: usize, j: usize) -> OmegaPoly<T> {
        OmegaPoly::new(self.slices.iter().map(|s| s[(i, j)].clone()).collect())
    }

    pub fn eval(&self, omega: &T) -> Mat<T> {
        let mut acc = Mat::zeros(self.n, self.n);
        for s in self.slices.iter().rev() {
            acc = &acc.scale(omega) + s;
        }
        acc
    }

    pub fn eval_f64(&self, omega: f64) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.n, self.n);
        for s in self.slices.iter().rev() {
            acc = acc * omega + s.to_dmatrix();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let deg = self.slices.len().max(other.slices.len());
        Self::from_slices(self.n, (0..deg).map(|r| &self.slice(r) + &other.slice(r)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let deg = self.slices.len().max(other.slices.len());
        Self::from_slices(self.n, (0..deg).map(|r| &self.slice(r) - &other.slice(r)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = vec![Mat::zeros(self.n, self.n); self.slices.len() + other.slices.len() - 1];
        for (i, a) in self.slices.iter().enumerate() {
            for (j, b) in other.slices.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_slices(self.n, out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_slices(self.n, self.slices.iter().map(|m| m.scale(s)).collect())
    }

    /// Adds `p(ω) I`.
    pub fn add_scalar_poly(&self, p: &OmegaPoly<T>) -> Self {
        let shift = Self::from_slices(
            self.n,
            p.coeffs().iter().map(|c| Mat::identity(self.n).scale(c)).collect(),
        );
        self.add(&shift)
    }

    /// `V⁻¹ M V` slice-wise, or `None` for singular `V`.
    pub fn similarity(&self, v: &Mat<T>) -> Option<Self> {
        let vinv = v.inverse()?;
        Some(Self::from_slices(self.n, self.slices.iter().map(|s| &(&vinv * s) * v).collect()))
    }

    pub fn trace(&self) -> OmegaPoly<T> {
        OmegaPoly::new(self.slices.iter().map(Mat::trace).collect())
    }

    /// Characteristic polynomial `det(λI − M)` as ω-polynomial coefficients of
    /// `λ^0 … λ^n` (the last is 1).
    pub fn char_poly(&self) -> Vec<OmegaPoly<T>> {
        let n = self.n;
        let mut coeffs = vec![OmegaPoly::zero(); n + 1];
        coeffs[n] = OmegaPoly::constant(T::one());
        let mut m = Self::zeros(n);
        for k in 1..=n {
            m = self.mul(&m).add_scalar_poly(&coeffs[n - k + 1]);
            let tr = self.mul(&m).trace();
            coeffs[n - k] = tr.scale(&(-T::one() / T::int(k as i64)));
        }
        coeffs
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> OmegaPolyMatrix<U> {
        OmegaPolyMatrix::from_slices(self.n, self.slices.iter().map(|s| s.map(f)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().map(Mat::max_abs).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn trimming_and_degree() {
        let p = OmegaPoly::new(vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(p.degree(), 0);
        assert!(OmegaPoly::<Rational>::new(vec![]).is_zero());
        assert_eq!(OmegaPoly::<Rational>::omega().mul(&OmegaPoly::omega()).degree(), 2);
    }

    #[test]
    fn slices_and_entries_agree() {
        let r: OmegaPolyMatrix<Rational> = OmegaPolyMatrix::from_slices(
            2,
            vec![Mat::from_i64(&[&[1, -1], &[1, -1]]), Mat::from_i64(&[&[0, 1], &[-1, 0]])],
        );
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(r.entry(i, j).coeff(k), r.slice(k)[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn char_poly_in_omega() {
        // [[1, ω-1], [1-ω, -1]]: λ² + (ω-1)² - 1
        let r: OmegaPolyMatrix<Rational> = OmegaPolyMatrix::from_slices(
            2,
            vec![Mat::from_i64(&[&[1, -1], &[1, -1]]), Mat::from_i64(&[&[0, 1], &[-1, 0]])],
        );
        let cp = r.char_poly();
        assert_eq!(cp[2], OmegaPoly::constant(q(1, 1)));
        assert!(cp[1].is_zero());
        assert_eq!(cp[0], OmegaPoly::new(vec![q(0, 1), q(-2, 1), q(1, 1)]));
    }
}
