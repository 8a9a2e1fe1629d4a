//! Matrix-valued trigonometric polynomials whose Fourier coefficients are
//! polynomials in the frequency ω.
//!
//! A [`TrigMatrix`] stores
//!
//! ```text
//! M(t) = Σ_r ω^r [ Σ_l even[r][l]·cos(lωt) + odd[r][l]·sin(lωt) ]
//! ```
//!
//! for `l = 0..=L` and `r = 0..=N`. The `l = 0` cosine slot holds the whole
//! constant term. In the doubled convention `a_0/2 + Σ a_l cos(lωt)` that slot
//! is `a_0/2`; every `l ≥ 1` slot is the full coefficient. Negative harmonics
//! are never stored: `cos(-lωt) = cos(lωt)` and `sin(-lωt) = -sin(lωt)`.

mod embed;
mod exp;
mod omega;
mod trace;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::mat::Mat;
use crate::scalar::Scalar;

pub use embed::{evenodd_lift, evenodd_residual};
pub use exp::ExpTrigMatrix;
pub use omega::{OmegaPoly, OmegaPolyMatrix};
pub use trace::{TraceAntiderivative, TraceSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Cos,
    Sin,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrigError {
    #[error("size mismatch: {left:?} vs {right:?}")]
    SizeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("determinant is not a constant")]
    NonConstantDeterminant,
    #[error("determinant vanishes identically")]
    SingularDeterminant,
    #[error("exponential coefficients are not conjugate-symmetric")]
    NotReal,
}

#[derive(Clone, PartialEq)]
pub struct TrigMatrix<T> {
    rows: usize,
    cols: usize,
    /// `[r][l]`, all rows of equal length `L + 1`.
    even: Vec<Vec<Mat<T>>>,
    /// `[r][l]`, `odd[r][0]` is always zero.
    odd: Vec<Vec<Mat<T>>>,
}

impl<T: Scalar> TrigMatrix<T> {
    fn blank(rows: usize, cols: usize, degree: usize, harmonics: usize) -> Self {
        let row = vec![Mat::zeros(rows, cols); harmonics + 1];
        TrigMatrix { rows, cols, even: vec![row.clone(); degree + 1], odd: vec![row; degree + 1] }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::blank(rows, cols, 0, 0)
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Mat::identity(n))
    }

    pub fn constant(m: Mat<T>) -> Self {
        let mut s = Self::blank(m.rows(), m.cols(), 0, 0);
        s.even[0][0] = m;
        s
    }

    /// Time-constant matrix with ω-polynomial entries.
    pub fn from_omega_poly(m: &OmegaPolyMatrix<T>) -> Self {
        let mut s = Self::blank(m.n(), m.n(), m.degree(), 0);
        for (r, slice) in m.slices().iter().enumerate() {
            s.even[r][0] = slice.clone();
        }
        s.normalized()
    }

    /// 1×1 series equal to the polynomial `p(ω)`.
    pub fn scalar(p: &OmegaPoly<T>) -> Self {
        let mut s = Self::blank(1, 1, p.degree(), 0);
        for (r, c) in p.coeffs().iter().enumerate() {
            s.even[r][0] = Mat::from_rows(vec![vec![c.clone()]]);
        }
        s.normalized()
    }

    /// 1×1 series `c·ω^r·cos(lωt)` or `c·ω^r·sin(lωt)`.
    pub fn scalar_term(c: T, r: usize, l: usize, parity: Parity) -> Self {
        Self::zeros(1, 1).with_term(r, l, parity, Mat::from_rows(vec![vec![c]]))
    }

    /// Adds `m·ω^r·cos(lωt)` (or `sin`) and returns the result.
    pub fn with_term(mut self, r: usize, l: usize, parity: Parity, m: Mat<T>) -> Self {
        self.add_term(r, l, parity, &m);
        self.normalized()
    }

    /// Adds a term in place. `sin(0)` terms vanish and are ignored.
    pub fn add_term(&mut self, r: usize, l: usize, parity: Parity, m: &Mat<T>) {
        assert!(m.rows() == self.rows && m.cols() == self.cols, "term shape mismatch");
        if parity == Parity::Sin && l == 0 {
            return;
        }
        self.grow(r, l);
        let slot = match parity {
            Parity::Cos => &mut self.even[r][l],
            Parity::Sin => &mut self.odd[r][l],
        };
        *slot = &*slot + m;
    }

    fn grow(&mut self, degree: usize, harmonics: usize) {
        let z = Mat::zeros(self.rows, self.cols);
        let width = self.even[0].len().max(harmonics + 1);
        for table in [&mut self.even, &mut self.odd] {
            while table.len() <= degree {
                table.push(Vec::new());
            }
            for row in table.iter_mut() {
                row.resize(width, z.clone());
            }
        }
    }

    /// Accumulates `sign·m` at signed harmonic `k`, folding negative indices
    /// by parity.
    fn accumulate(&mut self, r: usize, k: i64, parity: Parity, m: &Mat<T>, negate: bool) {
        let l = k.unsigned_abs() as usize;
        let flip = match parity {
            Parity::Cos => negate,
            Parity::Sin => {
                if l == 0 {
                    return;
                }
                negate ^ (k < 0)
            }
        };
        let slot = match parity {
            Parity::Cos => &mut self.even[r][l],
            Parity::Sin => &mut self.odd[r][l],
        };
        *slot = if flip { &*slot - m } else { &*slot + m };
    }

    /// Drops negligible top harmonics and ω powers.
    fn normalized(mut self) -> Self {
        let scale = self.max_abs();
        let zero_l = |s: &Self, l: usize| {
            s.even.iter().all(|row| row[l].is_negligible(scale))
                && s.odd.iter().all(|row| row[l].is_negligible(scale))
        };
        while self.even[0].len() > 1 && zero_l(&self, self.even[0].len() - 1) {
            for table in [&mut self.even, &mut self.odd] {
                for row in table.iter_mut() {
                    row.pop();
                }
            }
        }
        while self.even.len() > 1 {
            let r = self.even.len() - 1;
            let top_zero = self.even[r].iter().chain(&self.odd[r]).all(|m| m.is_negligible(scale));
            if !top_zero {
                break;
            }
            self.even.pop();
            self.odd.pop();
        }
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Effective harmonic bound `L`.
    pub fn harmonic_bound(&self) -> usize {
        self.even[0].len() - 1
    }

    /// Effective ω-degree `N`.
    pub fn omega_degree(&self) -> usize {
        self.even.len() - 1
    }

    pub fn coeff_ref(&self, r: usize, l: usize, parity: Parity) -> Option<&Mat<T>> {
        let table = match parity {
            Parity::Cos => &self.even,
            Parity::Sin => &self.odd,
        };
        table.get(r).and_then(|row| row.get(l))
    }

    /// Coefficient of `ω^r·cos(lωt)` or `ω^r·sin(lωt)`, zero when absent.
    pub fn coeff(&self, r: usize, l: usize, parity: Parity) -> Mat<T> {
        self.coeff_ref(r, l, parity).cloned().unwrap_or_else(|| Mat::zeros(self.rows, self.cols))
    }

    pub fn even(&self, r: usize, l: usize) -> Mat<T> {
        self.coeff(r, l, Parity::Cos)
    }

    pub fn odd(&self, r: usize, l: usize) -> Mat<T> {
        self.coeff(r, l, Parity::Sin)
    }

    /// Nonzero terms as `(r, l, parity, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Parity, &Mat<T>)> + '_ {
        let cos = self.even.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().map(move |(l, m)| (r, l, Parity::Cos, m))
        });
        let sin = self.odd.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().skip(1).map(move |(l, m)| (r, l, Parity::Sin, m))
        });
        cos.chain(sin).filter(|(_, _, _, m)| !m.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.even.iter().chain(&self.odd).flatten().map(Mat::max_abs).fold(0.0, f64::max)
    }

    /// True when every coefficient is zero (negligible on floats).
    pub fn is_zero(&self) -> bool {
        self.even.iter().chain(&self.odd).flatten().all(|m| m.is_negligible(0.0))
    }

    /// True when the only term is the constant `l = 0`, `r = 0` one.
    pub fn is_constant(&self) -> bool {
        self.harmonic_bound() == 0 && self.omega_degree() == 0
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> TrigMatrix<U> {
        let conv = |t: &Vec<Vec<Mat<T>>>| -> Vec<Vec<Mat<U>>> {
            t.iter().map(|row| row.iter().map(|m| m.map(f)).collect()).collect()
        };
        TrigMatrix { rows: self.rows, cols: self.cols, even: conv(&self.even), odd: conv(&self.odd) }
            .normalized()
    }

    pub fn to_f64(&self) -> TrigMatrix<f64> {
        self.map(|x| x.as_f64())
    }

    /// Numeric evaluation at `(ω, t)`.
    pub fn evaluate(&self, omega: f64, t: f64) -> DMatrix<f64> {
        self.at_omega(omega).eval(t)
    }

    /// Fixes ω numerically, leaving a cheap evaluator in `t`.
    pub fn at_omega(&self, omega: f64) -> FixedOmega {
        let collapse = |table: &Vec<Vec<Mat<T>>>| -> Vec<DMatrix<f64>> {
            (0..=self.harmonic_bound())
                .map(|l| {
                    let mut acc = DMatrix::zeros(self.rows, self.cols);
                    for row in table.iter().rev() {
                        acc = acc * omega + row[l].to_dmatrix();
                    }
                    acc
                })
                .collect()
        };
        FixedOmega { omega, cos: collapse(&self.even), sin: collapse(&self.odd) }
    }

    /// Exact evaluation at frequency `omega` and phase `θ = ωt` given by
    /// `(cos θ, sin θ)`. Multiples of the phase follow from angle addition,
    /// so rational points such as `(3/5, 4/5)` stay exact.
    pub fn evaluate_phase(&self, omega: &T, cos: &T, sin: &T) -> Mat<T> {
        let mut out = Mat::zeros(self.rows, self.cols);
        let (mut cl, mut sl) = (T::one(), T::zero());
        for l in 0..=self.harmonic_bound() {
            let mut pw = T::one();
            for r in 0..=self.omega_degree() {
                let e = self.even[r][l].scale(&(pw.clone() * cl.clone()));
                let o = self.odd[r][l].scale(&(pw.clone() * sl.clone()));
                out = &(&out + &e) + &o;
                pw = pw * omega.clone();
            }
            let next_c = cl.clone() * cos.clone() - sl.clone() * sin.clone();
            let next_s = sl * cos.clone() + cl * sin.clone();
            cl = next_c;
            sl = next_s;
        }
        out
    }

    /// Substitutes a numeric ω into the coefficients, leaving `N = 0`.
    pub fn collapse_omega(&self, omega: &T) -> Self {
        let mut out = Self::blank(self.rows, self.cols, 0, self.harmonic_bound());
        for (r, l, parity, m) in self.terms() {
            let pw = (0..r).fold(T::one(), |acc, _| acc * omega.clone());
            out.accumulate(0, l as i64, parity, &m.scale(&pw), false);
        }
        out.normalized()
    }

    /// The coefficient series of `ω^r` alone, as an `N = 0` series.
    pub fn omega_slice(&self, r: usize) -> Self {
        let mut out = Self::blank(self.rows, self.cols, 0, self.harmonic_bound());
        if r < self.even.len() {
            out.even[0] = self.even[r].clone();
            out.odd[0] = self.odd[r].clone();
        }
        out.normalized()
    }

    /// Reassembles `Σ ω^r S_r` from `N = 0` slices.
    pub fn from_omega_slices(slices: &[Self]) -> Self {
        let first = slices.first().expect("at least one slice");
        let mut out = Self::zeros(first.rows, first.cols);
        for (r, s) in slices.iter().enumerate() {
            for (r0, l, parity, m) in s.terms() {
                assert_eq!(r0, 0, "slices must be ω-free");
                out.add_term(r, l, parity, m);
            }
        }
        out.normalized()
    }

    /// `M(t)` at `ω = 0`: the `r = 0` cosine coefficients summed.
    pub fn at_omega_zero(&self) -> Mat<T> {
        self.even[0].iter().fold(Mat::zeros(self.rows, self.cols), |acc, m| &acc + m)
    }

    /// Period average per ω power.
    pub fn average(&self) -> Result<OmegaPolyMatrix<T>, TrigError> {
        if !self.is_square() {
            return Err(TrigError::NotSquare(self.rows, self.cols));
        }
        Ok(OmegaPolyMatrix::from_slices(self.rows, self.even.iter().map(|row| row[0].clone()).collect()))
    }

    /// Cosine part and sine part.
    pub fn even_odd_split(&self) -> (Self, Self) {
        let zero = vec![vec![Mat::zeros(self.rows, self.cols); self.even[0].len()]; self.even.len()];
        let even = TrigMatrix { rows: self.rows, cols: self.cols, even: self.even.clone(), odd: zero.clone() };
        let odd = TrigMatrix { rows: self.rows, cols: self.cols, even: zero, odd: self.odd.clone() };
        (even.normalized(), odd.normalized())
    }

    pub fn transpose(&self) -> Self {
        let tr = |t: &Vec<Vec<Mat<T>>>| t.iter().map(|row| row.iter().map(Mat::transpose).collect()).collect();
        TrigMatrix { rows: self.cols, cols: self.rows, even: tr(&self.even), odd: tr(&self.odd) }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Mat<T>, &Mat<T>) -> Mat<T>) -> Self {
        let degree = self.omega_degree().max(other.omega_degree());
        let harmonics = self.harmonic_bound().max(other.harmonic_bound());
        let mut out = Self::blank(self.rows, self.cols, degree, harmonics);
        for r in 0..=degree {
            for l in 0..=harmonics {
                out.even[r][l] = f(&self.even(r, l), &other.even(r, l));
                out.odd[r][l] = f(&self.odd(r, l), &other.odd(r, l));
            }
        }
        out.normalized()
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), TrigError> {
        if self.shape() != other.shape() {
            return Err(TrigError::SizeMismatch { left: self.shape(), right: other.shape() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TrigError> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TrigError> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale(&self, s: &T) -> Self {
        let sc = |t: &Vec<Vec<Mat<T>>>| t.iter().map(|row| row.iter().map(|m| m.scale(s)).collect()).collect();
        TrigMatrix { rows: self.rows, cols: self.cols, even: sc(&self.even), odd: sc(&self.odd) }.normalized()
    }

    /// Multiplies by the scalar polynomial `p(ω)`.
    pub fn scale_poly(&self, p: &OmegaPoly<T>) -> Self {
        let mut out = Self::blank(self.rows, self.cols, self.omega_degree() + p.degree(), self.harmonic_bound());
        for (r, l, parity, m) in self.terms() {
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.accumulate(r + k, l as i64, parity, &m.scale(c), false);
                }
            }
        }
        out.normalized()
    }

    /// Exact product through the product-to-sum identities.
    pub fn try_mul(&self, other: &Self) -> Result<Self, TrigError> {
        if self.cols != other.rows {
            return Err(TrigError::SizeMismatch { left: self.shape(), right: other.shape() });
        }
        let mut out = Self::blank(
            self.rows,
            other.cols,
            self.omega_degree() + other.omega_degree(),
            self.harmonic_bound() + other.harmonic_bound(),
        );
        let half = T::ratio(1, 2);
        for (r1, l1, p1, a) in self.terms() {
            for (r2, l2, p2, b) in other.terms() {
                let m = (a * b).scale(&half);
                let r = r1 + r2;
                let sum = (l1 + l2) as i64;
                let diff = l1 as i64 - l2 as i64;
                match (p1, p2) {
                    (Parity::Cos, Parity::Cos) => {
                        out.accumulate(r, diff, Parity::Cos, &m, false);
                        out.accumulate(r, sum, Parity::Cos, &m, false);
                    }
                    (Parity::Sin, Parity::Sin) => {
                        out.accumulate(r, diff, Parity::Cos, &m, false);
                        out.accumulate(r, sum, Parity::Cos, &m, true);
                    }
                    (Parity::Cos, Parity::Sin) => {
                        out.accumulate(r, sum, Parity::Sin, &m, false);
                        out.accumulate(r, diff, Parity::Sin, &m, true);
                    }
                    (Parity::Sin, Parity::Cos) => {
                        out.accumulate(r, sum, Parity::Sin, &m, false);
                        out.accumulate(r, diff, Parity::Sin, &m, false);
                    }
                }
            }
        }
        Ok(out.normalized())
    }

    /// `m · self` for a constant matrix `m`.
    pub fn left_mul(&self, m: &Mat<T>) -> Self {
        assert_eq!(m.cols(), self.rows, "left factor shape mismatch");
        let f = |t: &Vec<Vec<Mat<T>>>| t.iter().map(|row| row.iter().map(|c| m * c).collect()).collect();
        TrigMatrix { rows: m.rows(), cols: self.cols, even: f(&self.even), odd: f(&self.odd) }.normalized()
    }

    /// `self · m` for a constant matrix `m`.
    pub fn right_mul(&self, m: &Mat<T>) -> Self {
        assert_eq!(m.rows(), self.cols, "right factor shape mismatch");
        let f = |t: &Vec<Vec<Mat<T>>>| t.iter().map(|row| row.iter().map(|c| c * m).collect()).collect();
        TrigMatrix { rows: self.rows, cols: m.cols(), even: f(&self.even), odd: f(&self.odd) }.normalized()
    }

    /// `U⁻¹ M U`, or `None` for singular `U`.
    pub fn similarity(&self, u: &Mat<T>) -> Option<Self> {
        let uinv = u.inverse()?;
        Some(self.left_mul(&uinv).right_mul(u))
    }

    /// Time derivative. `d/dt cos(lωt) = -lω sin(lωt)`, so every term gains
    /// one power of ω.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::blank(self.rows, self.cols, self.omega_degree() + 1, self.harmonic_bound());
        for (r, l, parity, m) in self.terms() {
            let lm = m.scale(&T::int(l as i64));
            match parity {
                Parity::Cos => out.accumulate(r + 1, l as i64, Parity::Sin, &lm, true),
                Parity::Sin => out.accumulate(r + 1, l as i64, Parity::Cos, &lm, false),
            }
        }
        out.normalized()
    }

    /// Harmonic `l` of the original frequency becomes harmonic `m·l` of
    /// `ω' = ω/m`; the `ω^r` coefficient picks up `m^r`.
    pub fn to_subharmonic(&self, m: usize) -> Self {
        assert!(m >= 1);
        let mut out = Self::blank(self.rows, self.cols, self.omega_degree(), self.harmonic_bound() * m);
        for (r, l, parity, c) in self.terms() {
            let f = T::int((m as i64).pow(r as u32));
            out.accumulate(r, (l * m) as i64, parity, &c.scale(&f), false);
        }
        out.normalized()
    }

    /// Inverse of [`Self::to_subharmonic`]; `None` if some harmonic is not a
    /// multiple of `m`.
    pub fn from_subharmonic(&self, m: usize) -> Option<Self> {
        assert!(m >= 1);
        let mut out = Self::blank(self.rows, self.cols, self.omega_degree(), self.harmonic_bound() / m);
        for (r, l, parity, c) in self.terms() {
            if l % m != 0 {
                return None;
            }
            let f = T::one() / T::int((m as i64).pow(r as u32));
            out.accumulate(r, (l / m) as i64, parity, &c.scale(&f), false);
        }
        Some(out.normalized())
    }

    /// Entry `(i, j)` as a 1×1 series.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        self.sub_block(i, j, 1, 1)
    }

    pub fn sub_block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let f = |t: &Vec<Vec<Mat<T>>>| t.iter().map(|row| row.iter().map(|m| m.block(r0, c0, rows, cols)).collect()).collect();
        TrigMatrix { rows, cols, even: f(&self.even), odd: f(&self.odd) }.normalized()
    }

    /// The constant scalar value of a 1×1 series, as a polynomial in ω,
    /// when no time-varying terms are present.
    pub fn as_omega_poly(&self) -> Option<OmegaPoly<T>> {
        if self.rows != 1 || self.cols != 1 || self.harmonic_bound() != 0 {
            return None;
        }
        Some(OmegaPoly::new(self.even.iter().map(|row| row[0][(0, 0)].clone()).collect()))
    }

    /// Assembles a block matrix from a grid of series. Every block in a grid
    /// row must have the same row count and every block in a grid column the
    /// same column count.
    pub fn from_blocks(grid: &[Vec<Self>]) -> Self {
        let row_sizes: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let col_sizes: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let rows = row_sizes.iter().sum();
        let cols = col_sizes.iter().sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert!(b.rows == row_sizes[bi] && b.cols == col_sizes[bj], "block shape mismatch");
                for (r, l, parity, m) in b.terms() {
                    let mut big = Mat::zeros(rows, cols);
                    big.set_block(r0, c0, m);
                    out.add_term(r, l, parity, &big);
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        out.normalized()
    }

    pub fn trace(&self) -> Result<Self, TrigError> {
        if !self.is_square() {
            return Err(TrigError::NotSquare(self.rows, self.cols));
        }
        let f = |t: &Vec<Vec<Mat<T>>>| {
            t.iter().map(|row| row.iter().map(|m| Mat::from_rows(vec![vec![m.trace()]])).collect()).collect()
        };
        Ok(TrigMatrix { rows: 1, cols: 1, even: f(&self.even), odd: f(&self.odd) }.normalized())
    }

    /// Cofactor-expansion determinant as a 1×1 series.
    pub fn determinant(&self) -> Result<Self, TrigError> {
        if !self.is_square() {
            return Err(TrigError::NotSquare(self.rows, self.cols));
        }
        let grid = self.entry_grid();
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(minor_det(&grid, &rows, &cols))
    }

    /// Transposed cofactor matrix.
    pub fn adjugate(&self) -> Result<Self, TrigError> {
        if !self.is_square() {
            return Err(TrigError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let grid = self.entry_grid();
        let mut adj: Vec<Vec<Self>> = vec![vec![Self::zeros(1, 1); n]; n];
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&k| k != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&k| k != j).collect();
                let d = minor_det(&grid, &rows, &cols);
                adj[j][i] = if (i + j) % 2 == 0 { d } else { -&d };
            }
        }
        Ok(Self::from_blocks(&adj))
    }

    /// `adj(M)/det(M)` when the determinant is a nonzero number.
    pub fn inverse_if_const_det(&self) -> Result<Self, TrigError> {
        let det = self.determinant()?;
        if !det.is_constant() {
            return Err(TrigError::NonConstantDeterminant);
        }
        let d = det.even[0][0][(0, 0)].clone();
        if d.negligible(self.max_abs().powi(self.rows as i32)) {
            return Err(TrigError::SingularDeterminant);
        }
        Ok(self.adjugate()?.scale(&(T::one() / d)))
    }

    fn entry_grid(&self) -> Vec<Vec<Self>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect()).collect()
    }
}

/// Laplace expansion along the first listed row, memoized on the set of
/// remaining columns.
fn minor_det<T: Scalar>(grid: &[Vec<TrigMatrix<T>>], rows: &[usize], cols: &[usize]) -> TrigMatrix<T> {
    fn rec<T: Scalar>(
        grid: &[Vec<TrigMatrix<T>>],
        rows: &[usize],
        cols: &[usize],
        mask: u64,
        memo: &mut HashMap<u64, TrigMatrix<T>>,
    ) -> TrigMatrix<T> {
        let depth = mask.count_ones() as usize;
        if depth == rows.len() {
            return TrigMatrix::identity(1);
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = TrigMatrix::zeros(1, 1);
        let mut sign_neg = false;
        for (ci, &c) in cols.iter().enumerate() {
            if mask & (1 << ci) != 0 {
                continue;
            }
            let e = &grid[rows[depth]][c];
            if !e.is_zero() {
                let sub = rec(grid, rows, cols, mask | (1 << ci), memo);
                let term = e * &sub;
                acc = if sign_neg { &acc - &term } else { &acc + &term };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    assert_eq!(rows.len(), cols.len());
    assert!(rows.len() < 64);
    let mut memo = HashMap::new();
    rec(grid, rows, cols, 0, &mut memo)
}

/// A series with ω fixed numerically; evaluation in `t` only.
#[derive(Clone, Debug)]
pub struct FixedOmega {
    omega: f64,
    cos: Vec<DMatrix<f64>>,
    sin: Vec<DMatrix<f64>>,
}

impl FixedOmega {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        let mut acc = self.cos[0].clone();
        for l in 1..self.cos.len() {
            let (s, c) = (l as f64 * self.omega * t).sin_cos();
            acc += &self.cos[l] * c + &self.sin[l] * s;
        }
        acc
    }
}

impl<T: Scalar> fmt::Debug for TrigMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigMatrix {}x{} {{", self.rows, self.cols)?;
        for (r, l, parity, m) in self.terms() {
            let p = match parity {
                Parity::Cos => "cos",
                Parity::Sin => "sin",
            };
            write!(f, " w^{r} {p}({l}): {m:?};")?;
        }
        write!(f, " }}")
    }
}

impl<T: Scalar> Add for &TrigMatrix<T> {
    type Output = TrigMatrix<T>;

    fn add(self, rhs: Self) -> TrigMatrix<T> {
        self.try_add(rhs).expect("TrigMatrix add")
    }
}

impl<T: Scalar> Sub for &TrigMatrix<T> {
    type Output = TrigMatrix<T>;

    fn sub(self, rhs: Self) -> TrigMatrix<T> {
        self.try_sub(rhs).expect("TrigMatrix sub")
    }
}

impl<T: Scalar> Mul for &TrigMatrix<T> {
    type Output = TrigMatrix<T>;

    fn mul(self, rhs: Self) -> TrigMatrix<T> {
        self.try_mul(rhs).expect("TrigMatrix mul")
    }
}

impl<T: Scalar> Neg for &TrigMatrix<T> {
    type Output = TrigMatrix<T>;

    fn neg(self) -> TrigMatrix<T> {
        self.scale(&-T::one())
    }
}
