//! Report rendering. Numbers stay at full precision until serialization,
//! where `--digits` may round them.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const FULL_DIGITS: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// Free text; only the self test has one.
    Text,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A table plus scalar results, echoing every input parameter.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Value,
    pub summary: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Plain-text rendering, when the command has one.
    pub text: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, parameters: &impl Serialize, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            parameters: serde_json::to_value(parameters).unwrap_or(Value::Null),
            summary: Map::new(),
            columns,
            rows: Vec::new(),
            text: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn render(&self, format: Format, digits: usize) -> Result<String, CliError> {
        match format {
            Format::Csv => Ok(self.csv(digits)),
            Format::Json => Ok(serde_json::to_string_pretty(&self.json(digits))? + "\n"),
            Format::Text => Ok(self.text.clone().unwrap_or_else(|| self.csv(digits))),
        }
    }

    fn csv(&self, digits: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c, digits)).collect();
            out += &cells.join(",");
            out.push('\n');
        }
        out
    }

    pub fn json(&self, digits: usize) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(|c| json_cell(c, digits)).collect())).collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), round_value(v, digits))).collect();
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        })
    }

    /// Summary lines for stderr when the table goes out as CSV.
    pub fn summary_lines(&self, digits: usize) -> String {
        self.summary
            .iter()
            .map(|(k, v)| match round_value(v, digits) {
                Value::String(s) => format!("{k}: {s}\n"),
                v => format!("{k}: {v}\n"),
            })
            .collect()
    }
}

/// `digits` significant digits, in the style of printf's %g.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.clamp(1, FULL_DIGITS);
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit_once('e').map(|(_, e)| e.parse().unwrap_or(0)).unwrap_or(0);
    if x == 0.0 || (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

fn round(x: f64, digits: usize) -> f64 {
    if digits >= FULL_DIGITS || !x.is_finite() {
        x
    } else {
        format_sig(x, digits).parse().unwrap_or(x)
    }
}

fn csv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(x) => format_sig(*x, digits),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell, digits: usize) -> Value {
    match c {
        Cell::Num(x) => json_num(round(*x, digits)),
        Cell::Int(i) => json!(i),
        Cell::Bool(b) => json!(b),
        Cell::Text(s) => json!(s),
        Cell::Empty => Value::Null,
    }
}

fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn round_value(v: &Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json_num(round(n.as_f64().unwrap_or(f64::NAN), digits)),
        Value::Array(a) => Value::Array(a.iter().map(|x| round_value(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), round_value(x, digits))).collect()),
        v => v.clone(),
    }
}

/// Records what produced an output file so a run can be repeated.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    /// SHA-256 over "blob <len>\0" followed by the canonical parameter JSON.
    pub input_hash: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: &Value, outputs: Vec<PathBuf>) -> Self {
        let canonical = parameters.to_string();
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", canonical.len()));
        h.update(canonical.as_bytes());
        let input_hash = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        RunManifest { command: command.to_string(), parameters: parameters.clone(), input_hash, outputs }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the rendered report to `out` (plus its manifest) or to stdout.
pub fn emit(report: &Report, format: Format, digits: usize, out: Option<&Path>, extra: Vec<PathBuf>) -> Result<(), CliError> {
    let body = report.render(format, digits)?;
    match out {
        Some(path) => {
            std::fs::write(path, &body)?;
            let mut outputs = vec![path.to_path_buf()];
            outputs.extend(extra);
            let m = RunManifest::new(report.command, &report.parameters, outputs);
            std::fs::write(manifest_path(path), serde_json::to_string_pretty(&m)? + "\n")?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    if format == Format::Csv {
        eprint!("{}", report.summary_lines(digits));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0, 17), "1.0000000000000000");
        assert_eq!(format_sig(0.1, 17), "0.10000000000000001");
        assert_eq!(format_sig(1.5e-7, 3), "1.50e-7");
        assert_eq!(format_sig(123456.0, 3), "1.23e5");
        assert_eq!(format_sig(0.0, 4), "0.000");
        for x in [std::f64::consts::PI, -2.5e-300, 6.02e23, 1.0 / 3.0] {
            assert_eq!(format_sig(x, 17).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn hash_depends_on_parameters_only() {
        let p = json!({"a": 1.0});
        let m1 = RunManifest::new("kernel", &p, vec![]);
        let m2 = RunManifest::new("kernel", &p, vec![PathBuf::from("x.csv")]);
        assert_eq!(m1.input_hash, m2.input_hash);
        assert_ne!(m1.input_hash, RunManifest::new("kernel", &json!({"a": 2.0}), vec![]).input_hash);
        assert_eq!(m1.input_hash.len(), 64);
    }
}
