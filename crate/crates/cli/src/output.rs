//! Rendering and writing documents.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use gtld::numerics::round_sig;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Round every float in a JSON tree to `digits` significant digits.
/// Integers are left alone.
pub fn round_json(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round_sig(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_json(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_json(x, digits)),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(doc: &T, digits: usize) -> CliResult<String> {
    let mut v = serde_json::to_value(doc).map_err(|e| CliError::compute(e.to_string()))?;
    round_json(&mut v, digits);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

pub fn finish_csv(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::compute(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::compute(e.to_string()))
}

pub fn csv_error(e: csv::Error) -> CliError {
    CliError::compute(format!("csv: {e}"))
}

/// Write to `out` when given, otherwise to standard output.
pub fn emit(doc: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, doc),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(doc.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::compute(format!("stdout: {e}")))
        }
    }
}

pub fn write_file(path: &Path, doc: &str) -> CliResult<()> {
    fs::write(path, doc)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Left-aligned first column, right-aligned rest.
pub fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                if i == 0 {
                    format!("{cell:<w$}", w = width[i])
                } else {
                    format!("{cell:>w$}", w = width[i])
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
