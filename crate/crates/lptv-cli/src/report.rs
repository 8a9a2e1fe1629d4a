//! Deterministic JSON and CSV rendering.

use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::CliError;
use crate::format::{fmt_f64, Entry};
use lptv::{Mat, OmegaPoly, OmegaPolyMatrix, Parity, TrigMatrix};

/// Name of the environment variable overriding default tolerances.
pub const TOLERANCE_VAR: &str = "LPTV_TOL";

/// `default`, unless [`TOLERANCE_VAR`] holds a positive number.
pub fn tolerance(default: f64) -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_VAR) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
            _ => Err(CliError::Input(format!("{TOLERANCE_VAR} must be a positive number, got `{v}`"))),
        },
        Err(_) => Ok(default),
    }
}

/// Float written with 17 significant digits; non-finite values become `null`.
#[derive(Clone, Copy, Debug)]
pub struct F(pub f64);

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n: serde_json::Number = fmt_f64(self.0).parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

#[derive(Serialize, Clone, Copy, Debug)]
pub struct C {
    pub re: F,
    pub im: F,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C { re: F(z.re), im: F(z.im) }
    }
}

pub fn complexes(v: &[Complex64]) -> Vec<C> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn dmatrix(m: &DMatrix<f64>) -> Vec<Vec<F>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| F(m[(i, j)])).collect()).collect()
}

pub fn mat<T: Entry>(m: &Mat<T>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].render()).collect()).collect()
}

pub fn poly<T: Entry>(p: &OmegaPoly<T>) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(Entry::render).collect()
}

/// ω-power slices of `R`, lowest first.
pub fn omega_poly_matrix<T: Entry>(r: &OmegaPolyMatrix<T>) -> Vec<Vec<Vec<String>>> {
    r.slices().iter().map(mat).collect()
}

#[derive(Serialize)]
pub struct Term {
    pub power: usize,
    pub harmonic: usize,
    pub parity: &'static str,
    pub matrix: Vec<Vec<String>>,
}

pub fn terms<T: Entry>(m: &TrigMatrix<T>) -> Vec<Term> {
    let mut out: Vec<_> = m.terms().filter(|(_, _, _, c)| !c.is_zero()).collect();
    out.sort_by_key(|&(r, l, p, _)| (r, l, p == Parity::Sin));
    out.into_iter()
        .map(|(r, l, p, c)| Term {
            power: r,
            harmonic: l,
            parity: if p == Parity::Cos { "cos" } else { "sin" },
            matrix: mat(c),
        })
        .collect()
}

pub fn to_json<S: Serialize>(v: &S) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes rows of string cells as CSV; rows may differ in length.
pub fn to_csv(rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}
