//! Output rendering: tables and experiment reports as CSV or JSON, written
//! to stdout or to a file.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use parkdist::asymptotic::ExperimentReport;
use parkdist::exact::rational_to_f64;
use parkdist::Rational;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A single table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    /// Free-form text: permutations, preference vectors, exact rationals.
    Text(String),
    /// Integer-valued cell.
    Int(u64),
    /// Floating-point cell, rendered with nine significant digits in CSV.
    Float(f64),
    /// Boolean cell.
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_sig9(*v),
            Cell::Flag(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Flag(v) => json!(v),
        }
    }
}

/// Renders an exact rational as `numerator/denominator`, always with an
/// explicit denominator so the column parses uniformly.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Convenience pair used by most exact tables: the `num/den` text cell and
/// the decimal cell for the same value.
pub fn rational_cells(r: &Rational) -> (Cell, Cell) {
    (Cell::Text(fmt_rational(r)), Cell::Float(rational_to_f64(r)))
}

/// Formats with nine significant digits: fixed point for moderate
/// magnitudes, scientific notation otherwise.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        let prec = (8 - mag).max(0) as usize;
        format!("{x:.prec$}")
    } else {
        format!("{x:.8e}")
    }
}

/// Tabular command output plus the metadata identifying what produced it.
pub struct Table {
    command: &'static str,
    params: Vec<(&'static str, Value)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Table { command, params: Vec::new(), columns, rows: Vec::new() }
    }

    /// Records a command parameter; parameters appear in the JSON header
    /// (CSV output carries only the column header and rows).
    pub fn param(&mut self, key: &'static str, value: impl Into<Value>) {
        self.params.push((key, value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("command".into(), json!(self.command));
        for (k, v) in &self.params {
            obj.insert((*k).into(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    m.insert((*col).to_string(), cell.json());
                }
                Value::Object(m)
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap();
        s.push('\n');
        s
    }
}

/// Renders an experiment report: JSON is the native serde form; CSV
/// flattens it into `key,value` rows with nested maps dotted.
pub fn render_report(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            let mut push = |k: &str, v: String| {
                out.push_str(k);
                out.push(',');
                out.push_str(&v);
                out.push('\n');
            };
            push("schema", report.schema.to_string());
            push("experiment", report.experiment.clone());
            push("n", report.n.to_string());
            push("j", report.j.map(|j| j.to_string()).unwrap_or_default());
            push("samples", report.samples.to_string());
            push("seed", report.seed.to_string());
            push("threads", report.threads.to_string());
            if let Some(sweep) = &report.n_sweep {
                let joined: Vec<String> = sweep.iter().map(|v| v.to_string()).collect();
                push("n_sweep", joined.join(" "));
            }
            for (k, v) in &report.estimates {
                push(&format!("estimates.{k}"), fmt_sig9(*v));
            }
            for (k, v) in &report.comparators {
                push(&format!("comparators.{k}"), fmt_sig9(*v));
            }
            for (k, v) in &report.tolerances {
                push(&format!("tolerances.{k}"), fmt_sig9(*v));
            }
            push("pass", report.pass.to_string());
            push("wall_time_ms", report.wall_time_ms.to_string());
            out
        }
    }
}

/// Writes rendered output to `path` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}
