//! Complex-exponential form `M(t) = Σ_{l=-L}^{L} A_l e^{ilωt}` at a fixed ω.
//!
//! Coefficients are kept as real and imaginary parts over the scalar field so
//! the exact path stays exact.

use nalgebra::DMatrix;
use num::complex::Complex64;

use super::{Parity, TrigError, TrigMatrix};
use crate::mat::Mat;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpTrigMatrix<T> {
    rows: usize,
    cols: usize,
    bound: usize,
    /// Index `l + bound`.
    re: Vec<Mat<T>>,
    im: Vec<Mat<T>>,
}

impl<T: Scalar> ExpTrigMatrix<T> {
    pub fn zeros(rows: usize, cols: usize, bound: usize) -> Self {
        let z = vec![Mat::zeros(rows, cols); 2 * bound + 1];
        ExpTrigMatrix { rows, cols, bound, re: z.clone(), im: z }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn harmonic_bound(&self) -> usize {
        self.bound
    }

    fn index(&self, l: i64) -> Option<usize> {
        (l.unsigned_abs() as usize <= self.bound).then(|| (l + self.bound as i64) as usize)
    }

    /// Real part of `A_l`, zero outside the stored range.
    pub fn re(&self, l: i64) -> Mat<T> {
        self.index(l).map_or_else(|| Mat::zeros(self.rows, self.cols), |i| self.re[i].clone())
    }

    /// Imaginary part of `A_l`, zero outside the stored range.
    pub fn im(&self, l: i64) -> Mat<T> {
        self.index(l).map_or_else(|| Mat::zeros(self.rows, self.cols), |i| self.im[i].clone())
    }

    /// Sets `A_l = re + i·im`. Panics outside the stored range.
    pub fn set(&mut self, l: i64, re: Mat<T>, im: Mat<T>) {
        let i = self.index(l).expect("harmonic outside stored range");
        self.re[i] = re;
        self.im[i] = im;
    }

    pub fn complex(&self, l: i64) -> DMatrix<Complex64> {
        let (re, im) = (self.re(l).to_dmatrix(), self.im(l).to_dmatrix());
        DMatrix::from_fn(self.rows, self.cols, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    /// `A_{-l} = conj(A_l)` for every `l`.
    pub fn is_real(&self) -> bool {
        let scale = self.re.iter().chain(&self.im).map(Mat::max_abs).fold(0.0, f64::max);
        (0..=self.bound as i64).all(|l| {
            (&self.re(l) - &self.re(-l)).is_negligible(scale) && (&self.im(l) + &self.im(-l)).is_negligible(scale)
        })
    }

    pub fn evaluate(&self, omega: f64, t: f64) -> DMatrix<Complex64> {
        let mut acc = DMatrix::zeros(self.rows, self.cols);
        for l in -(self.bound as i64)..=self.bound as i64 {
            let phase = Complex64::from_polar(1.0, l as f64 * omega * t);
            acc += self.complex(l) * phase;
        }
        acc
    }

    /// Back to cosine-sine form: `even_l = 2 Re A_l`, `odd_l = -2 Im A_l`.
    pub fn to_trig(&self) -> Result<TrigMatrix<T>, TrigError> {
        if !self.is_real() {
            return Err(TrigError::NotReal);
        }
        let two = T::int(2);
        let mut out = TrigMatrix::constant(self.re(0));
        for l in 1..=self.bound {
            out.add_term(0, l, Parity::Cos, &self.re(l as i64).scale(&two));
            out.add_term(0, l, Parity::Sin, &self.im(l as i64).scale(&-two.clone()));
        }
        Ok(out.normalized())
    }
}

impl<T: Scalar> TrigMatrix<T> {
    /// Exponential coefficients at a numeric ω:
    /// `A_0 = even_0`, `A_{±l} = (even_l ∓ i·odd_l)/2`.
    pub fn to_exponential(&self, omega: &T) -> ExpTrigMatrix<T> {
        let c = self.collapse_omega(omega);
        let bound = c.harmonic_bound();
        let mut out = ExpTrigMatrix::zeros(self.rows, self.cols, bound);
        let half = T::ratio(1, 2);
        out.set(0, c.even(0, 0), Mat::zeros(self.rows, self.cols));
        for l in 1..=bound {
            let re = c.even(0, l).scale(&half);
            let im = c.odd(0, l).scale(&half);
            out.set(l as i64, re.clone(), -&im);
            out.set(-(l as i64), re, im);
        }
        out
    }
}
