//! Report assembly and emission as text, JSON or CSV.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::{CommandConfig, Format};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// The result of one command in all three renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub result: Value,
    pub text: String,
    pub table: Table,
    /// Whether every check in the report passed.
    pub passed: bool,
    /// Set when a budget stopped the computation early.
    pub budget_exceeded: Option<String>,
}

impl Report {
    pub fn new(result: impl Serialize, text: String, table: Table) -> Result<Self, CliError> {
        Ok(Report { result: serde_json::to_value(result)?, text, table, passed: true, budget_exceeded: None })
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'static str,
    input: &'a CommandConfig,
    result: &'a Value,
}

/// One-line description of the inputs, used as the text header and CSV
/// provenance column.
pub fn descriptor(cfg: &CommandConfig) -> String {
    let v = serde_json::to_value(cfg).expect("config serializes");
    let mut parts = Vec::new();
    if let Value::Object(map) = v {
        for (k, v) in map {
            let s = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            parts.push(format!("{k}={s}"));
        }
    }
    parts.join(" ")
}

pub fn render(report: &Report, cfg: &CommandConfig) -> Result<Vec<u8>, CliError> {
    match cfg.format {
        Format::Text => {
            let mut out = format!("# hurwitz {VERSION} {}\n", descriptor(cfg));
            out.push_str(&report.text);
            if !out.ends_with('\n') {
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        Format::Json => {
            let env = Envelope { version: VERSION, input: cfg, result: &report.result };
            // serde_json maps are ordered by key
            let v = serde_json::to_value(&env)?;
            let mut out = serde_json::to_vec_pretty(&v)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let provenance = format!("hurwitz {VERSION} {}", descriptor(cfg));
            let mut header = vec!["input".to_string()];
            header.extend(report.table.headers.iter().cloned());
            w.write_record(&header)?;
            for row in &report.table.rows {
                let mut rec = vec![provenance.clone()];
                rec.extend(row.iter().cloned());
                w.write_record(&rec)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
    }
}

/// Writes the rendered report to `path`, or standard output.
pub fn emit_report(report: &Report, cfg: &CommandConfig, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(report, cfg)?;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Rows of a square matrix, space separated.
pub fn matrix_rows(m: &[Vec<usize>]) -> Vec<String> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect()
}
