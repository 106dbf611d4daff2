//! Output assembly. Every command produces one `Output`; nothing is
//! printed before the command has finished, so a failing run never leaves
//! half a table on stdout.

use serde_json::{json, Map, Value};
use sphere_strings::table_hash;

use crate::error::CliError;

pub struct Output {
    pub stdout: String,
    /// Notes for stderr (provenance remarks, skipped items).
    pub notes: Vec<String>,
    pub passed: bool,
}

impl Output {
    pub fn pass(stdout: String) -> Self {
        Output { stdout, notes: Vec::new(), passed: true }
    }

    pub fn with_status(stdout: String, passed: bool) -> Self {
        Output { stdout, notes: Vec::new(), passed }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

pub fn banner() -> String {
    format!("{} (tables {})", env!("CARGO_PKG_VERSION"), table_hash())
}

/// Pretty JSON with a provenance block prepended to top-level objects.
pub fn json_out(value: Value) -> String {
    let body = match value {
        Value::Object(obj) => {
            let mut out = Map::new();
            out.insert("provenance".into(), json!({ "version": env!("CARGO_PKG_VERSION"), "table_hash": table_hash() }));
            out.extend(obj);
            Value::Object(out)
        }
        other => other,
    };
    let mut s = serde_json::to_string_pretty(&body).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn csv_out(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// Left-aligned columns separated by two spaces, with a rule under the
/// header. Widths count characters, not bytes.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            if i + 1 < cells.len() {
                s.extend(std::iter::repeat(' ').take(w - cell.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// `key: value` lines, keys padded to a common width.
pub fn text_fields(fields: &[(&str, String)]) -> String {
    let w = fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    fields.iter().map(|(k, v)| format!("{:<w$}  {}\n", format!("{}:", k), v, w = w + 1)).collect()
}

/// Floats in text and CSV output: fixed 12 significant digits so runs
/// compare byte for byte.
pub fn num(x: f64) -> String {
    format!("{:.12e}", x)
}

pub fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}
