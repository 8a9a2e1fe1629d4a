//! Named LPTV systems with their known Floquet factors, and generators that
//! build a system from a chosen `(P, R)` pair.
//!
//! Entries whose `A(t)` or `P(t)` has infinitely many harmonics carry a
//! [`ClosedForm`] evaluator instead of a [`TrigMatrix`]. Evaluators take a
//! complex time argument so that `Ṗ` is available by complex-step
//! differentiation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::mat::Mat;
use crate::scalar::{Rational, Scalar};
use crate::trigmat::{OmegaPolyMatrix, Parity, TrigError, TrigMatrix};

mod named;
mod tables;

pub use named::{
    aggarwal_infante, cauchy_euler, cauchy_euler_exp_integral, cauchy_euler_transition, example_3x3, hill, inverted_pendulum, markus_yamabe, mathieu, meissner,
    pendulum, rlc, rosenbrock, wu_row_h,
};
pub use tables::{table_row, table_row_with};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("det P(t) is not constant")]
    NonConstantDeterminant,
    #[error("det P(t) vanishes")]
    SingularDeterminant,
    #[error("exp(ωtG) is not periodic for this generator")]
    NonPeriodicGenerator,
    #[error(transparent)]
    Trig(TrigError),
}

impl From<TrigError> for CatalogError {
    fn from(e: TrigError) -> Self {
        match e {
            TrigError::NonConstantDeterminant => CatalogError::NonConstantDeterminant,
            TrigError::SingularDeterminant => CatalogError::SingularDeterminant,
            other => CatalogError::Trig(other),
        }
    }
}

type ClosedFn = dyn Fn(f64, Complex64) -> DMatrix<Complex64> + Send + Sync;

/// Matrix-valued `(ω, t) ↦ M(t)`, analytic in `t`.
#[derive(Clone)]
pub struct ClosedForm(Arc<ClosedFn>);

const COMPLEX_STEP: f64 = 1e-30;

impl ClosedForm {
    pub fn new(f: impl Fn(f64, Complex64) -> DMatrix<Complex64> + Send + Sync + 'static) -> Self {
        ClosedForm(Arc::new(f))
    }

    pub fn eval(&self, omega: f64, t: f64) -> DMatrix<f64> {
        (self.0)(omega, Complex64::new(t, 0.0)).map(|z| z.re)
    }

    /// `dM/dt` by complex step; exact to rounding for analytic entries.
    pub fn derivative(&self, omega: f64, t: f64) -> DMatrix<f64> {
        (self.0)(omega, Complex64::new(t, COMPLEX_STEP)).map(|z| z.im / COMPLEX_STEP)
    }
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ClosedForm(..)")
    }
}

/// Piecewise-constant `A(t)`: `values[m]` holds on a fraction `fractions[m]`
/// of each period, in order.
#[derive(Clone, Debug)]
pub struct Piecewise {
    pub values: Vec<DMatrix<f64>>,
    pub fractions: Vec<f64>,
}

impl Piecewise {
    /// `(A_m, duration_m)` over one period `2π/ω`.
    pub fn segments(&self, omega: f64) -> Vec<(DMatrix<f64>, f64)> {
        let period = std::f64::consts::TAU / omega;
        self.values.iter().cloned().zip(self.fractions.iter().map(|f| f * period)).collect()
    }

    pub fn eval(&self, omega: f64, t: f64) -> DMatrix<f64> {
        let period = std::f64::consts::TAU / omega;
        let phase = (t / period).rem_euclid(1.0);
        let mut acc = 0.0;
        for (v, f) in self.values.iter().zip(&self.fractions) {
            acc += f;
            if phase < acc {
                return v.clone();
            }
        }
        self.values.last().cloned().expect("empty piecewise descriptor")
    }
}

#[derive(Clone, Debug)]
pub enum SystemMatrix {
    Series(TrigMatrix<Rational>),
    Closed(ClosedForm),
    Piecewise(Piecewise),
}

#[derive(Clone, Debug)]
pub enum KnownP {
    Series(TrigMatrix<Rational>),
    Closed(ClosedForm),
}

/// Whether `A(t)` and `P(t)` have finitely many harmonics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Finiteness {
    pub harmonics_finite: bool,
    pub factor_finite: bool,
}

impl Finiteness {
    /// Cases 1–4: (∞, ∞), (∞, finite), (finite, ∞), (finite, finite).
    pub fn case(k: u8) -> Self {
        match k {
            1 => Finiteness { harmonics_finite: false, factor_finite: false },
            2 => Finiteness { harmonics_finite: false, factor_finite: true },
            3 => Finiteness { harmonics_finite: true, factor_finite: false },
            _ => Finiteness { harmonics_finite: true, factor_finite: true },
        }
    }

    pub fn case_number(&self) -> u8 {
        match (self.harmonics_finite, self.factor_finite) {
            (false, false) => 1,
            (false, true) => 2,
            (true, false) => 3,
            (true, true) => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub a: SystemMatrix,
    pub known_p: Option<KnownP>,
    pub known_r: Option<OmegaPolyMatrix<Rational>>,
    pub params: BTreeMap<String, Rational>,
    pub finiteness: Option<Finiteness>,
    /// Frequency the system is defined at, when it is not a free parameter.
    pub fixed_omega: Option<Rational>,
    /// Set for systems that are not periodic in `t`.
    pub aperiodic: bool,
    pub note: Option<String>,
}

impl CatalogEntry {
    fn new(id: &str, description: &str, a: SystemMatrix) -> Self {
        CatalogEntry {
            id: id.to_string(),
            description: description.to_string(),
            a,
            known_p: None,
            known_r: None,
            params: BTreeMap::new(),
            finiteness: None,
            fixed_omega: None,
            aperiodic: false,
            note: None,
        }
    }

    fn with_pair(mut self, p: KnownP, r: OmegaPolyMatrix<Rational>) -> Self {
        self.known_p = Some(p);
        self.known_r = Some(r);
        self
    }

    fn param(mut self, name: &str, v: &Rational) -> Self {
        self.params.insert(name.to_string(), v.clone());
        self
    }

    fn case(mut self, k: u8) -> Self {
        self.finiteness = Some(Finiteness::case(k));
        self
    }

    fn note(mut self, text: &str) -> Self {
        self.note = Some(text.to_string());
        self
    }

    pub fn n(&self) -> usize {
        match &self.a {
            SystemMatrix::Series(a) => a.rows(),
            SystemMatrix::Closed(f) => f.eval(1.0, 0.0).nrows(),
            SystemMatrix::Piecewise(p) => p.values[0].nrows(),
        }
    }

    pub fn series(&self) -> Option<&TrigMatrix<Rational>> {
        match &self.a {
            SystemMatrix::Series(a) => Some(a),
            _ => None,
        }
    }

    pub fn a_at(&self, omega: f64, t: f64) -> DMatrix<f64> {
        match &self.a {
            SystemMatrix::Series(a) => a.to_f64().evaluate(omega, t),
            SystemMatrix::Closed(f) => f.eval(omega, t),
            SystemMatrix::Piecewise(p) => p.eval(omega, t),
        }
    }

    /// Evaluator `(ω, t) ↦ A(t)` with the series converted once.
    pub fn evaluator(&self) -> impl Fn(f64, f64) -> DMatrix<f64> + Send + Sync + '_ {
        let series = self.series().map(|a| a.to_f64());
        move |omega, t| match &series {
            Some(a) => a.evaluate(omega, t),
            None => self.a_at(omega, t),
        }
    }

    pub fn p_at(&self, omega: f64, t: f64) -> Option<DMatrix<f64>> {
        match self.known_p.as_ref()? {
            KnownP::Series(p) => Some(p.to_f64().evaluate(omega, t)),
            KnownP::Closed(f) => Some(f.eval(omega, t)),
        }
    }

    pub fn p_dot_at(&self, omega: f64, t: f64) -> Option<DMatrix<f64>> {
        match self.known_p.as_ref()? {
            KnownP::Series(p) => Some(p.to_f64().differentiate().evaluate(omega, t)),
            KnownP::Closed(f) => Some(f.derivative(omega, t)),
        }
    }

    pub fn r_at(&self, omega: f64) -> Option<DMatrix<f64>> {
        Some(self.known_r.as_ref()?.map(|x| x.as_f64()).eval_f64(omega))
    }

    /// `max |A P − Ṗ − P R|` at one point.
    pub fn residual_at(&self, omega: f64, t: f64) -> Option<f64> {
        let (p, pd, r) = (self.p_at(omega, t)?, self.p_dot_at(omega, t)?, self.r_at(omega)?);
        let res = &self.a_at(omega, t) * &p - pd - &p * r;
        Some(res.amax())
    }

    /// `A P − Ṗ − P R` as a series, when `A` and `P` are both series.
    pub fn symbolic_residual(&self) -> Option<Result<TrigMatrix<Rational>, TrigError>> {
        let (SystemMatrix::Series(a), Some(KnownP::Series(p)), Some(r)) = (&self.a, &self.known_p, &self.known_r)
        else {
            return None;
        };
        let r = TrigMatrix::from_omega_poly(r);
        Some((|| {
            let ap = a.try_mul(p)?;
            let pr = p.try_mul(&r)?;
            ap.try_sub(&p.differentiate())?.try_sub(&pr)
        })())
    }

    pub fn info(&self) -> EntryInfo {
        EntryInfo {
            id: self.id.clone(),
            description: self.description.clone(),
            n: self.n(),
            kind: match self.a {
                SystemMatrix::Series(_) => "series",
                SystemMatrix::Closed(_) => "closed-form",
                SystemMatrix::Piecewise(_) => "piecewise",
            },
            params: self.params.clone(),
            finiteness: self.finiteness,
            known_p: self.known_p.is_some(),
            known_r: self.known_r.is_some(),
        }
    }
}

/// Row of [`list_entries`].
#[derive(Clone, Debug)]
pub struct EntryInfo {
    pub id: String,
    pub description: String,
    pub n: usize,
    pub kind: &'static str,
    pub params: BTreeMap<String, Rational>,
    pub finiteness: Option<Finiteness>,
    pub known_p: bool,
    pub known_r: bool,
}

const TABLE_IDS: [(&str, &str); 4] = [("4-1", "ABC"), ("4-2", "ABC"), ("4-3", "ABCDEF"), ("4-4", "ABCDEFGH")];

const NAMED_IDS: [&str; 11] = [
    "markus-yamabe",
    "aggarwal-infante",
    "rosenbrock",
    "example-3x3",
    "mathieu",
    "hill",
    "meissner",
    "pendulum",
    "inverted-pendulum",
    "rlc",
    "cauchy-euler",
];

/// Every entry with default parameters, tables first.
pub fn all_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (table, rows) in TABLE_IDS {
        for row in rows.chars() {
            out.push(table_row(table, &row.to_string()).expect("listed row exists"));
        }
    }
    for id in NAMED_IDS {
        out.push(entry(id).expect("listed entry exists"));
    }
    out
}

pub fn list_entries() -> Vec<EntryInfo> {
    all_entries().iter().map(CatalogEntry::info).collect()
}

/// Lookup by id: `"4-4:H"`-style table rows or a named system. `"row-h"` is
/// an alias for `"4-4:H"`.
pub fn entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some((table, row)) = id.split_once(':') {
        return table_row(table, row);
    }
    let r = rat;
    match id {
        "markus-yamabe" => Ok(markus_yamabe(&r(3, 2))),
        "aggarwal-infante" => Ok(aggarwal_infante(&r(1, 2))),
        "rosenbrock" => Ok(rosenbrock()),
        "example-3x3" => Ok(example_3x3()),
        "mathieu" => Ok(mathieu(&r(1, 1), &r(1, 5))),
        "hill" => {
            let psi = TrigMatrix::zeros(1, 1)
                .with_term(0, 1, Parity::Cos, Mat::diag(&[r(1, 2)]))
                .with_term(0, 2, Parity::Sin, Mat::diag(&[r(1, 2)]));
            Ok(hill(&r(1, 1), &r(1, 5), &psi))
        }
        "meissner" => Ok(meissner(&r(1, 1), &r(3, 10))),
        "pendulum" => Ok(pendulum(&r(1, 1), &r(981, 100), &r(1, 10))),
        "inverted-pendulum" => Ok(inverted_pendulum(&r(1, 1), &r(981, 100), &r(1, 10))),
        "rlc" => {
            let g = TrigMatrix::zeros(1, 1).with_term(0, 1, Parity::Cos, Mat::identity(1));
            Ok(rlc(&r(1, 10), &r(1, 1), &r(1, 1), &r(1, 5), &g))
        }
        "cauchy-euler" => Ok(cauchy_euler()),
        "row-h" => table_row("4-4", "H"),
        _ => Err(CatalogError::UnknownEntry(id.to_string())),
    }
}

/// `A = (Ṗ + P R) P⁻¹`; requires `det P` to be a nonzero constant.
pub fn generate_from_pair<T: Scalar>(
    p: &TrigMatrix<T>,
    r: &OmegaPolyMatrix<T>,
) -> Result<TrigMatrix<T>, CatalogError> {
    let pinv = p.inverse_if_const_det()?;
    let num = p.differentiate().try_add(&p.try_mul(&TrigMatrix::from_omega_poly(r))?)?;
    Ok(num.try_mul(&pinv)?)
}

/// Output of [`exp_sandwich`].
#[derive(Clone, Debug)]
pub struct Sandwich<T: Scalar> {
    pub a: TrigMatrix<T>,
    pub p: TrigMatrix<T>,
    pub r: OmegaPolyMatrix<T>,
}

/// `A(t) = e^{−ωtG} B e^{ωtG}` with `P = e^{−ωtG}` and `R = B + ωG`.
///
/// `G` must be zero or satisfy `G² = −m² I` for an integer `m ≥ 1`, so that
/// `e^{θG} = cos(mθ) I + sin(mθ) G/m`.
pub fn exp_sandwich<T: Scalar>(b: &OmegaPolyMatrix<T>, g: &Mat<T>) -> Result<Sandwich<T>, CatalogError> {
    let n = b.n();
    let p = if g.is_zero() {
        TrigMatrix::identity(n)
    } else {
        let sq = g * g;
        let m2 = -(sq[(0, 0)].clone());
        if sq != Mat::identity(n).scale(&(-m2.clone())) {
            return Err(CatalogError::NonPeriodicGenerator);
        }
        let m = (1..=64).find(|&k| T::int(k * k) == m2).ok_or(CatalogError::NonPeriodicGenerator)?;
        let inv_m = T::one() / T::int(m as i64);
        TrigMatrix::zeros(n, n)
            .with_term(0, m as usize, Parity::Cos, Mat::identity(n))
            .with_term(0, m as usize, Parity::Sin, g.scale(&(-inv_m)))
    };
    let r = b.add(&OmegaPolyMatrix::from_slices(n, vec![Mat::zeros(n, n), g.clone()]));
    let a = p.try_mul(&TrigMatrix::from_omega_poly(b))?.try_mul(&p.inverse_if_const_det()?)?;
    Ok(Sandwich { a, p, r })
}

// Builders for writing series entry by entry.

/// `coef · ω^r · trig(lωt)`; `l = 0` is the constant.
#[derive(Clone, Debug)]
pub(crate) struct Term(Rational, usize, usize, Parity);

impl Term {
    /// Multiply by ω.
    pub(crate) fn w(mut self) -> Self {
        self.1 += 1;
        self
    }

    pub(crate) fn times(mut self, s: &Rational) -> Self {
        self.0 = self.0 * s.clone();
        self
    }
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn k(c: Rational) -> Term {
    Term(c, 0, 0, Parity::Cos)
}

pub(crate) fn co(c: Rational, l: usize) -> Term {
    Term(c, 0, l, Parity::Cos)
}

pub(crate) fn si(c: Rational, l: usize) -> Term {
    Term(c, 0, l, Parity::Sin)
}

/// Series from a grid of term lists.
pub(crate) fn grid(entries: Vec<Vec<Vec<Term>>>) -> TrigMatrix<Rational> {
    let (rows, cols) = (entries.len(), entries[0].len());
    let mut out = TrigMatrix::zeros(rows, cols);
    for (i, row) in entries.into_iter().enumerate() {
        for (j, terms) in row.into_iter().enumerate() {
            for Term(c, r, l, parity) in terms {
                let mut m = Mat::zeros(rows, cols);
                m[(i, j)] = c;
                out.add_term(r, l, parity, &m);
            }
        }
    }
    out
}

/// Apply `f` to every term of every entry.
pub(crate) fn map_terms(entries: Vec<Vec<Vec<Term>>>, f: impl Fn(Term) -> Term) -> Vec<Vec<Vec<Term>>> {
    entries.into_iter().map(|row| row.into_iter().map(|e| e.into_iter().map(&f).collect()).collect()).collect()
}

/// `R` from `[[R⁰ entries]]` and `[[R¹ entries]]`.
pub(crate) fn omega_linear(r0: Mat<Rational>, r1: Mat<Rational>) -> OmegaPolyMatrix<Rational> {
    OmegaPolyMatrix::from_slices(r0.rows(), vec![r0, r1])
}

pub(crate) fn cmat(rows: usize, cols: usize, v: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(rows, cols, v)
}
