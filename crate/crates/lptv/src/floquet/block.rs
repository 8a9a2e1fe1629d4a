//! The block system `Ã P̃ = P̃ R` obtained by matching Fourier coefficients of
//! `A·P − Ṗ = P·R`.
//!
//! Unknowns are stacked as `P̃ = [P_0; P_1^even; P_1^odd; …; P_p^even; P_p^odd]`
//! where `P_0` is twice the constant term of `P`. Block row `k` holds the
//! `cos(kωt)` (even) or `sin(kωt)` (odd) coefficient of the equation; row 0 is
//! doubled so that `P_0` enters in the same scale as the other blocks.

use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::trigmat::{Parity, TrigMatrix};

/// Per-power slices `Ã^{r}` of the block matrix, `Ã = Σ_r ω^r Ã^{r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSystem<T> {
    n: usize,
    p: usize,
    /// Largest harmonic among the block rows; `p` for the square system.
    row_harmonics: usize,
    slices: Vec<Mat<T>>,
}

/// Block index of harmonic `k` with the given parity (`k = 0` has only the
/// even block).
pub fn block_index(k: usize, parity: Parity) -> usize {
    match (k, parity) {
        (0, _) => 0,
        (k, Parity::Cos) => 2 * k - 1,
        (k, Parity::Sin) => 2 * k,
    }
}

impl<T: Scalar> BlockSystem<T> {
    /// Square system with block rows `k = 0..=p`.
    pub fn assemble(a: &TrigMatrix<T>, p: usize) -> Self {
        Self::build(a, p, p)
    }

    /// Tall system with block rows up to `k = p + L`, which holds every
    /// coefficient equation a `p`-harmonic `P` must satisfy.
    pub fn assemble_tall(a: &TrigMatrix<T>, p: usize) -> Self {
        Self::build(a, p, p + a.harmonic_bound())
    }

    fn build(a: &TrigMatrix<T>, p: usize, kmax: usize) -> Self {
        assert!(a.is_square(), "block system needs a square A");
        let n = a.rows();
        let degree = a.omega_degree().max(1);
        let mut slices = Vec::with_capacity(degree + 1);
        for r in 0..=degree {
            let e = |m: i64| fold_even(a, r, m);
            let o = |m: i64| fold_odd(a, r, m);
            let mut s = Mat::zeros(n * (2 * kmax + 1), n * (2 * p + 1));
            s.set_block(0, 0, &e(0));
            for l in 1..=p {
                s.set_block(0, n * block_index(l, Parity::Cos), &a.even(r, l));
                s.set_block(0, n * block_index(l, Parity::Sin), &a.odd(r, l));
            }
            for k in 1..=kmax {
                let (ki, ke, ko) = (k as i64, block_index(k, Parity::Cos), block_index(k, Parity::Sin));
                s.set_block(n * ke, 0, &e(ki));
                s.set_block(n * ko, 0, &o(ki));
                for l in 1..=p {
                    let li = l as i64;
                    let (le, lo) = (block_index(l, Parity::Cos), block_index(l, Parity::Sin));
                    s.set_block(n * ke, n * le, &(&e(ki + li) + &e(ki - li)));
                    s.set_block(n * ke, n * lo, &(&o(ki + li) - &o(ki - li)));
                    s.set_block(n * ko, n * le, &(&o(ki - li) + &o(ki + li)));
                    s.set_block(n * ko, n * lo, &(&e(ki - li) - &e(ki + li)));
                }
                if r == 1 && k <= p {
                    let kid = Mat::identity(n).scale(&T::int(ki));
                    s.add_block(n * ke, n * ko, &-&kid);
                    s.add_block(n * ko, n * ke, &kid);
                }
            }
            slices.push(s);
        }
        BlockSystem { n, p, row_harmonics: kmax, slices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of unknown rows, `n(2p + 1)`.
    pub fn unknown_rows(&self) -> usize {
        self.n * (2 * self.p + 1)
    }

    pub fn equation_rows(&self) -> usize {
        self.n * (2 * self.row_harmonics + 1)
    }

    pub fn slices(&self) -> &[Mat<T>] {
        &self.slices
    }

    /// `Ã^{r}`, zero beyond the stored degree.
    pub fn slice(&self, r: usize) -> Mat<T> {
        self.slices
            .get(r)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.equation_rows(), self.unknown_rows()))
    }

    /// `Ã` at a numeric ω.
    pub fn at_omega(&self, omega: &T) -> Mat<T> {
        let mut acc = Mat::zeros(self.equation_rows(), self.unknown_rows());
        for s in self.slices.iter().rev() {
            acc = &acc.scale(omega) + s;
        }
        acc
    }

    /// The row selector `S` with `S·P̃ = P(t|ω=0)`.
    pub fn selector(&self) -> Mat<T> {
        let n = self.n;
        let mut s = Mat::zeros(n, self.unknown_rows());
        s.set_block(0, 0, &Mat::identity(n).scale(&T::ratio(1, 2)));
        for k in 1..=self.p {
            s.set_block(0, n * block_index(k, Parity::Cos), &Mat::identity(n));
        }
        s
    }

    /// Pads `X` with zero rows to the equation height.
    pub fn embed_unknowns(&self, x: &Mat<T>) -> Mat<T> {
        let mut out = Mat::zeros(self.equation_rows(), x.cols());
        out.set_block(0, 0, x);
        out
    }

    /// `Ã^{r} X − X R^{r}` for each slice.
    pub fn residuals(&self, x: &Mat<T>, r_slices: &[Mat<T>]) -> Vec<Mat<T>> {
        let ex = self.embed_unknowns(x);
        let deg = self.slices.len().max(r_slices.len());
        (0..deg)
            .map(|r| {
                let rr = r_slices.get(r).cloned().unwrap_or_else(|| Mat::zeros(self.n, self.n));
                &(&self.slice(r) * x) - &(&ex * &rr)
            })
            .collect()
    }
}

/// Stacks the Fourier coefficients of an ω-free `P` with at most `p`
/// harmonics.
pub fn stack<T: Scalar>(pm: &TrigMatrix<T>, p: usize) -> Mat<T> {
    assert_eq!(pm.omega_degree(), 0, "stacked P must not depend on ω");
    assert!(pm.harmonic_bound() <= p, "P has more than p harmonics");
    let n = pm.rows();
    let mut x = Mat::zeros(n * (2 * p + 1), pm.cols());
    x.set_block(0, 0, &pm.even(0, 0).scale(&T::int(2)));
    for k in 1..=p {
        x.set_block(n * block_index(k, Parity::Cos), 0, &pm.even(0, k));
        x.set_block(n * block_index(k, Parity::Sin), 0, &pm.odd(0, k));
    }
    x
}

/// Inverse of [`stack`].
pub fn unstack<T: Scalar>(x: &Mat<T>, n: usize) -> TrigMatrix<T> {
    let p = (x.rows() / n - 1) / 2;
    let cols = x.cols();
    let mut out = TrigMatrix::constant(x.block(0, 0, n, cols).scale(&T::ratio(1, 2)));
    for k in 1..=p {
        out.add_term(0, k, Parity::Cos, &x.block(n * block_index(k, Parity::Cos), 0, n, cols));
        out.add_term(0, k, Parity::Sin, &x.block(n * block_index(k, Parity::Sin), 0, n, cols));
    }
    out.with_term(0, 0, Parity::Cos, Mat::zeros(n, cols))
}

/// `E(m) = A_|m|^even / 2` of slice `r`, the whole constant term at `m = 0`.
fn fold_even<T: Scalar>(a: &TrigMatrix<T>, r: usize, m: i64) -> Mat<T> {
    let l = m.unsigned_abs() as usize;
    if l == 0 {
        a.even(r, 0)
    } else {
        a.even(r, l).scale(&T::ratio(1, 2))
    }
}

/// `O(m) = sign(m) A_|m|^odd / 2` of slice `r`.
fn fold_odd<T: Scalar>(a: &TrigMatrix<T>, r: usize, m: i64) -> Mat<T> {
    let v = a.odd(r, m.unsigned_abs() as usize).scale(&T::ratio(1, 2));
    if m < 0 {
        -&v
    } else {
        v
    }
}

/// The `k = 0` sine row `[0, O(−l) + O(l), E(−l) − E(l), …]` of every power
/// of ω. It vanishes identically for real `A`.
pub fn zero_row_odd_part<T: Scalar>(a: &TrigMatrix<T>, p: usize) -> Mat<T> {
    let n = a.rows();
    let mut out = Mat::zeros(n, n * (2 * p + 1));
    for r in 0..=a.omega_degree() {
        for l in 1..=p as i64 {
            let lu = l as usize;
            out.add_block(0, n * block_index(lu, Parity::Cos), &(&fold_odd(a, r, -l) + &fold_odd(a, r, l)));
            out.add_block(0, n * block_index(lu, Parity::Sin), &(&fold_even(a, r, -l) - &fold_even(a, r, l)));
        }
    }
    out
}
