//! Resolution of a system from a file or a catalog id.

use std::collections::BTreeMap;
use std::path::Path;

use lptv::catalog::{self, CatalogEntry, SystemMatrix};
use lptv::{Rational, TrigMatrix};

use crate::error::CliError;
use crate::format::{self, Document};

/// A system to analyse, with optional input/output matrices.
pub struct System {
    pub entry: CatalogEntry,
    pub io: BTreeMap<String, TrigMatrix<Rational>>,
}

pub fn read_document(path: &Path) -> Result<Document<Rational>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|mut e| {
        e.msg = format!("{}: {}", path.display(), e.msg);
        CliError::Parse(e)
    })
}

/// `key=value` pairs with exact values.
pub fn parse_params(raw: &[String]) -> Result<Vec<(String, Rational)>, CliError> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Input(format!("parameter `{kv}` is not key=value")))?;
            let v = format::parse_number(v.trim()).ok_or_else(|| CliError::Input(format!("parameter `{k}` has invalid value `{v}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Catalog entry `id` with some parameters replaced.
pub fn catalog_entry(id: &str, params: &[(String, Rational)]) -> Result<CatalogEntry, CliError> {
    if params.is_empty() {
        return Ok(catalog::entry(id)?);
    }
    if let Some((table, row)) = id.split_once(':') {
        let refs: Vec<(&str, Rational)> = params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        return Ok(catalog::table_row_with(table, row, &refs)?);
    }
    let base = catalog::entry(id)?;
    let mut merged = base.params.clone();
    for (k, v) in params {
        match merged.get_mut(k) {
            Some(slot) => *slot = v.clone(),
            None => return Err(CliError::Input(format!("`{id}` has no parameter `{k}`"))),
        }
    }
    let p = |k: &str| &merged[k];
    Ok(match base.id.as_str() {
        "markus-yamabe" => catalog::markus_yamabe(p("a")),
        "aggarwal-infante" => catalog::aggarwal_infante(p("beta")),
        "mathieu" => catalog::mathieu(p("a"), p("q")),
        "meissner" => catalog::meissner(p("a"), p("q")),
        "pendulum" => catalog::pendulum(p("l"), p("g"), p("Y0")),
        "inverted-pendulum" => catalog::inverted_pendulum(p("l"), p("g"), p("Y0")),
        _ => return Err(CliError::Input(format!("parameters of `{id}` cannot be changed from the command line"))),
    })
}

/// Series-form document for a catalog entry.
pub fn entry_document(e: &CatalogEntry) -> Result<Document<Rational>, CliError> {
    let a = e.series().ok_or_else(|| CliError::Input(format!("`{}` is not a trigonometric series and has no text form", e.id)))?;
    let mut doc = Document::new(&e.id, e.n());
    doc.description = Some(e.description.clone());
    doc.omega = e.fixed_omega.clone();
    doc.params = e.params.clone();
    doc.a = Some(a.clone());
    Ok(doc)
}

fn document_system(doc: Document<Rational>) -> Result<System, CliError> {
    let a = doc.a.ok_or_else(|| CliError::Input(format!("`{}` has no [A] section", doc.name)))?;
    let entry = CatalogEntry {
        id: doc.name,
        description: doc.description.unwrap_or_default(),
        a: SystemMatrix::Series(a),
        known_p: None,
        known_r: None,
        params: doc.params,
        finiteness: None,
        fixed_omega: doc.omega,
        aperiodic: false,
        note: None,
    };
    Ok(System { entry, io: doc.io })
}

/// Loads from `input` or `--system`, exactly one of which must be given.
pub fn load(input: Option<&Path>, system: Option<&str>, params: &[String]) -> Result<System, CliError> {
    match (input, system) {
        (Some(_), Some(_)) => Err(CliError::Input("give either an input file or --system, not both".into())),
        (None, None) => Err(CliError::Input("no input: give a system file or --system <id>".into())),
        (Some(path), None) => {
            if !params.is_empty() {
                return Err(CliError::Input("--param only applies to --system".into()));
            }
            document_system(read_document(path)?)
        }
        (None, Some(id)) => Ok(System { entry: catalog_entry(id, &parse_params(params)?)?, io: BTreeMap::new() }),
    }
}

impl System {
    pub fn name(&self) -> &str {
        &self.entry.id
    }

    pub fn series(&self) -> Result<&TrigMatrix<Rational>, CliError> {
        self.entry
            .series()
            .ok_or_else(|| CliError::Input(format!("`{}` is not a trigonometric series; this command needs one", self.entry.id)))
    }

    /// `requested`, else the system's own frequency, else 1.
    pub fn omega(&self, requested: Option<f64>) -> f64 {
        requested.or_else(|| self.entry.fixed_omega.as_ref().map(lptv::Scalar::as_f64)).unwrap_or(1.0)
    }
}
