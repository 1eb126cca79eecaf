//! Report tables and their CSV / JSON encodings.

use crate::config::Format;
use logconcave::bounds::BoundCertificate;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    /// 12 significant digits; non-finite values spelled out.
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => Value::String(fmt_num(*x)),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 {
        // one spelling for both signed zeros
        format!("{:.11e}", 0.0)
    } else {
        format!("{x:.11e}")
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}
impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Rows whose `pass` column is false.
    pub fn failing(&self) -> impl Iterator<Item = (usize, &Vec<Cell>)> {
        let col = self.column("pass");
        self.rows.iter().enumerate().filter(move |(_, r)| matches!(col.map(|c| &r[c]), Some(Cell::Bool(false))))
    }

    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    fn row_json(&self, r: &[Cell]) -> Value {
        let mut m = Map::new();
        for (h, c) in self.header.iter().zip(r) {
            m.insert(h.clone(), c.to_json());
        }
        Value::Object(m)
    }
}

/// Generic inequality check `lhs <= rhs (1 + rel) + abs`.
pub const CHECK_HEADER: [&str; 8] = ["measure", "check", "parameter", "lhs", "rhs", "rel_slack", "abs_slack", "pass"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub measure: String,
    pub check: String,
    pub parameter: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_slack: f64,
    pub abs_slack: f64,
}

impl Check {
    pub fn new(measure: &str, check: &str, parameter: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            measure: measure.into(),
            check: check.into(),
            parameter: parameter.into(),
            lhs,
            rhs,
            rel_slack: 0.0,
            abs_slack: 0.0,
        }
    }

    pub fn rel(mut self, s: f64) -> Self {
        self.rel_slack = s;
        self
    }

    pub fn abs(mut self, s: f64) -> Self {
        self.abs_slack = s;
        self
    }

    pub fn pass(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + self.rel_slack) + self.abs_slack
    }

    pub fn row(&self) -> Vec<Cell> {
        vec![
            self.measure.clone().into(),
            self.check.clone().into(),
            self.parameter.clone().into(),
            self.lhs.into(),
            self.rhs.into(),
            self.rel_slack.into(),
            self.abs_slack.into(),
            self.pass().into(),
        ]
    }
}

pub fn check_table(name: &str, checks: impl IntoIterator<Item = Check>) -> Table {
    let mut t = Table::new(name, &CHECK_HEADER);
    for c in checks {
        t.push(c.row());
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub table: String,
    pub row: usize,
    pub slack: f64,
    pub certificate: Option<BoundCertificate>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub metadata: Map<String, Value>,
    /// Certificates behind the rows of certificate tables, keyed by
    /// `(table, row)`.
    pub certificates: Vec<(String, usize, BoundCertificate)>,
    pub slack: f64,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn failures(&self) -> Vec<Failure> {
        let mut out = Vec::new();
        for t in &self.tables {
            for (i, _) in t.failing() {
                let certificate = self
                    .certificates
                    .iter()
                    .find(|(name, row, _)| *name == t.name && *row == i)
                    .map(|(_, _, c)| c.clone());
                out.push(Failure { table: t.name.clone(), row: i, slack: self.slack, certificate });
            }
        }
        out
    }

    pub fn failure_count(&self) -> usize {
        self.tables.iter().map(|t| t.failing().count()).sum()
    }

    pub fn summary(&self) -> Value {
        let failures: Vec<Value> = self
            .failures()
            .into_iter()
            .map(|f| {
                let t = self.table(&f.table).expect("failure refers to a table");
                let mut v = serde_json::to_value(&f).expect("failure serializes");
                v["values"] = t.row_json(&t.rows[f.row]);
                v
            })
            .collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| (t.name.clone(), Value::Array(t.rows.iter().map(|r| t.row_json(r)).collect())))
            .collect();
        json!({
            "metadata": self.metadata,
            "failure_count": self.failure_count(),
            "failures": failures,
            "tables": tables,
        })
    }
}

/// Writes one CSV per table and `summary.json`; returns the paths written.
pub fn emit(report: &Report, dir: &Path, formats: &[Format]) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Csv) {
        for t in &report.tables {
            let p = dir.join(format!("{}.csv", t.name));
            std::fs::write(&p, t.to_csv()?)?;
            written.push(p);
        }
    }
    if formats.contains(&Format::Json) {
        let p = dir.join("summary.json");
        let mut text = serde_json::to_string_pretty(&report.summary())?;
        text.push('\n');
        std::fs::write(&p, text)?;
        written.push(p);
    }
    Ok(written)
}
