//! Real block embeddings: complex numbers, split-complex numbers and the
//! even-odd lift that turns a solution into one with a traceless `R`.

use super::{OmegaPolyMatrix, TrigError, TrigMatrix};
use crate::scalar::Scalar;

impl<T: Scalar> TrigMatrix<T> {
    /// `A + iB ↦ [[A, -B], [B, A]]`.
    pub fn complex_embed(re: &Self, im: &Self) -> Result<Self, TrigError> {
        if re.shape() != im.shape() {
            return Err(TrigError::SizeMismatch { left: re.shape(), right: im.shape() });
        }
        Ok(Self::from_blocks(&[vec![re.clone(), -im], vec![im.clone(), re.clone()]]))
    }

    /// `A + jB ↦ [[A, B], [B, A]]` with `j² = +1`.
    pub fn split_embed(re: &Self, im: &Self) -> Result<Self, TrigError> {
        if re.shape() != im.shape() {
            return Err(TrigError::SizeMismatch { left: re.shape(), right: im.shape() });
        }
        Ok(Self::from_blocks(&[vec![re.clone(), im.clone()], vec![im.clone(), re.clone()]]))
    }

    /// `[[A_odd, A_even], [A_even, A_odd]]`.
    pub fn evenodd_embed(&self) -> Self {
        let (e, o) = self.even_odd_split();
        Self::from_blocks(&[vec![o.clone(), e.clone()], vec![e, o]])
    }
}

/// Lifts a solution `(P, R)` of `A` to the solution
/// `([[P_even, P_odd], [P_odd, P_even]], [[0, R], [R, 0]])` of the even-odd
/// embedding of `A`.
pub fn evenodd_lift<T: Scalar>(
    p: &TrigMatrix<T>,
    r: &OmegaPolyMatrix<T>,
) -> (TrigMatrix<T>, OmegaPolyMatrix<T>) {
    let (pe, po) = p.even_odd_split();
    let lifted_p = TrigMatrix::from_blocks(&[vec![pe.clone(), po.clone()], vec![po, pe]]);
    let n = r.n();
    let z = TrigMatrix::zeros(n, n);
    let rt = TrigMatrix::from_omega_poly(r);
    let lifted = TrigMatrix::from_blocks(&[vec![z.clone(), rt.clone()], vec![rt, z]]);
    let slices = (0..=lifted.omega_degree()).map(|k| lifted.even(k, 0)).collect();
    (lifted_p, OmegaPolyMatrix::from_slices(2 * n, slices))
}

/// `Ã·P̃ − dP̃/dt − P̃·R̃` for the even-odd embedding and the lifted solution.
pub fn evenodd_residual<T: Scalar>(
    a: &TrigMatrix<T>,
    p: &TrigMatrix<T>,
    r: &OmegaPolyMatrix<T>,
) -> TrigMatrix<T> {
    let at = a.evenodd_embed();
    let (pt, rt) = evenodd_lift(p, r);
    let rt = TrigMatrix::from_omega_poly(&rt);
    &(&(&at * &pt) - &pt.differentiate()) - &(&pt * &rt)
}
