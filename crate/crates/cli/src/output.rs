use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

/// Rows in input-grid order under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header row, then 17 significant digits per real.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(k) => write!(out, "{k}").unwrap(),
                    Cell::Real(x) => write!(out, "{x:.16e}").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }

    /// `{"command", "metric", "columns", "rows", ...extra}`; `metric` is a spec
    /// document that `--spec` accepts back.
    pub fn to_json(&self, command: &str, metric: Option<Value>, extra: Map<String, Value>) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(command));
        if let Some(m) = metric {
            doc.insert("metric".into(), m);
        }
        doc.insert("columns".into(), json!(self.columns));
        doc.insert("rows".into(), json!(self.rows));
        doc.extend(extra);
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("table serializes");
        text.push('\n');
        text
    }
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_keeps_seventeen_digits() {
        let mut t = Table::new(&["l", "x"]);
        t.push(vec![Cell::Int(3), Cell::Real(0.1)]);
        let csv = t.to_csv();
        assert_eq!(csv, "l,x\n3,1.0000000000000001e-1\n");
        let x: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(x, 0.1);
    }

    #[test]
    fn json_carries_metric_and_rows() {
        let mut t = Table::new(&["r"]);
        t.push(vec![Cell::Real(2.5)]);
        let text = t.to_json("analyze", Some(json!({"kind": "hyperbolic"})), Map::new());
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metric"]["kind"], "hyperbolic");
        assert_eq!(v["rows"][0][0], 2.5);
    }
}
