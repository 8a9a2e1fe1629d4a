//! `lptv catalog`: list entries or write one as a system file.

use clap::Subcommand;
use lptv::catalog;

use super::Output;
use crate::error::CliError;
use crate::input::{catalog_entry, entry_document, parse_params};

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// One tab-separated row per entry.
    List,
    /// Write an entry in the system-definition format.
    Emit {
        id: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

pub fn run(cmd: &CatalogCmd) -> Result<Output, CliError> {
    match cmd {
        CatalogCmd::List => {
            let mut out = String::from("id\tkind\tn\tcase\tparams\tdescription\n");
            for e in catalog::list_entries() {
                let case = e.finiteness.map_or("-".to_string(), |f| f.case_number().to_string());
                let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let params = if params.is_empty() { "-".to_string() } else { params.join(",") };
                out.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\n", e.id, e.kind, e.n, case, params, e.description));
            }
            Ok(Output::data(out))
        }
        CatalogCmd::Emit { id, params } => {
            let e = catalog_entry(id, &parse_params(params)?)?;
            Ok(Output::data(entry_document(&e)?.emit()))
        }
    }
}
