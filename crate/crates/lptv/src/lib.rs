//! Linear periodic time-varying systems `ẋ = A(t)x` with Fourier
//! coefficients that are polynomials in the frequency ω.
//!
//! - [`trigmat`]: matrix trigonometric polynomials and their algebra.
//! - [`floquet`]: the block system `ÃP̃ = P̃R` and the power-of-ω solver for
//!   Floquet factorizations `Φ(t, t₀) = P(t) e^{(t−t₀)R} P⁻¹(t₀)`.
//! - [`monodromy`]: numerical transition matrices, matrix exponential and
//!   real logarithm, characteristic multipliers.
//! - [`stability`]: classification of `R(ω)` and frequency sweeps.
//! - [`harmonic`]: Toeplitz operators, harmonic transfer functions, poles
//!   and zeros.
//! - [`catalog`]: named systems and generators from known `(P, R)` pairs.
//!
//! Every algebraic type is generic over [`Scalar`], implemented for `f64`
//! and for exact [`Rational`] numbers.

pub mod catalog;
pub mod exec;
pub mod floquet;
pub mod harmonic;
pub mod linalg;
pub mod mat;
pub mod monodromy;
pub mod scalar;
pub mod stability;
pub mod trigmat;

pub use exec::Exec;
pub use mat::Mat;
pub use scalar::{q, Rational, Scalar};
pub use trigmat::{OmegaPoly, OmegaPolyMatrix, Parity, TrigMatrix};
