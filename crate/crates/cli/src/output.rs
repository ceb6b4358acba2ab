//! Deterministic CSV and JSON rendering.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    pub fn opt(value: Option<f64>) -> Self {
        value.map_or(Cell::Missing, Cell::Num)
    }

    /// CSV text: numbers in scientific notation with `precision`
    /// significant digits.
    pub fn csv(&self, precision: usize) -> String {
        match self {
            Cell::Num(x) => format_number(*x, precision),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    /// JSON value; non-finite numbers become `null`.
    pub fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Value::from(*x),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }
}

pub fn format_number(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.*e}", precision.saturating_sub(1), x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, header: &str, precision: usize) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        writeln!(buf, "# {header}").map_err(|e| CliError::io(e.to_string()))?;
        let mut w = csv::Writer::from_writer(buf);
        let fail = |e: csv::Error| CliError::io(e.to_string());
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.csv(precision))).map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::io(e.to_string()))
    }

    pub fn to_json_rows(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// First row as an object keyed by column.
    pub fn to_json_record(&self) -> Value {
        let mut map = Map::new();
        if let Some(row) = self.rows.first() {
            for (k, v) in self.columns.iter().zip(row) {
                map.insert(k.to_string(), v.json());
            }
        }
        Value::Object(map)
    }
}

/// Labels matrix as CSV rows, no header row.
pub fn matrix_csv(header: &str, rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    writeln!(buf, "# {header}").map_err(|e| CliError::io(e.to_string()))?;
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(buf);
    for row in rows {
        w.write_record(row).map_err(|e| CliError::io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::io(e.to_string()))
}

pub fn json_bytes(value: &Value) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(format!("writing {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(format!("writing standard output: {e}")))
        }
    }
}
