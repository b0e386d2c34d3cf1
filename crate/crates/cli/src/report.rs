//! Reports: aligned text tables or a versioned JSON record.
//!
//! Record layout (schema version 1), keys in this order:
//! `schema_version` (integer), `command` (string), `inputs` (object),
//! `dims` (object of arrays of non-negative integers), `witnesses` (object,
//! scalars always rendered as rational strings), `checks` (object of booleans),
//! `timings` (object of microsecond integers, empty unless requested).

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use selfdual::exact::{parse_rational, Matrix, Scalar};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, header: &[&str]) -> Table {
        Table {
            title: title.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, out: &mut String) {
        let cols = self.header.len();
        let width: Vec<usize> = (0..cols)
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.header[c].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        // Numbers right-aligned, text left-aligned.
        let numeric: Vec<bool> = (0..cols)
            .map(|c| self.rows.iter().all(|r| parse_rational(&r[c]).is_ok()))
            .collect();
        out.push_str(&self.title);
        out.push('\n');
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row
                .iter()
                .zip(&width)
                .zip(&numeric)
                .map(|((cell, w), num)| match num {
                    true => format!("{cell:>w$}", w = *w),
                    false => format!("{cell:<w$}", w = *w),
                })
                .collect();
            out.push_str("  ");
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub tables: Vec<Table>,
    pub dims: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub checks: Map<String, Value>,
    pub timings: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: Map<String, Value>) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            tables: Vec::new(),
            dims: Map::new(),
            witnesses: Map::new(),
            checks: Map::new(),
            timings: Map::new(),
        }
    }

    pub fn dims(&mut self, name: &str, dims: &[usize]) {
        self.dims.insert(name.to_string(), Value::from(dims.to_vec()));
    }

    pub fn witness(&mut self, name: &str, value: Value) {
        self.witnesses.insert(name.to_string(), value);
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.insert(name.to_string(), Value::Bool(pass));
    }

    pub fn to_record(&self) -> Record {
        Record {
            schema_version: SCHEMA_VERSION,
            command: self.command.clone(),
            inputs: self.inputs.clone(),
            dims: self.dims.clone(),
            witnesses: self.witnesses.clone(),
            checks: self.checks.clone(),
            timings: self.timings.clone(),
        }
    }

    pub fn render_record(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_record()).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.command);
        for (k, v) in &self.inputs {
            if let Value::Object(_) = v {
                continue;
            }
            out.push_str(&format!("  {k}={}", plain(v)));
        }
        out.push('\n');
        for t in &self.tables {
            out.push('\n');
            t.render(&mut out);
        }
        if !self.witnesses.is_empty() {
            out.push_str("\nwitnesses\n");
            for (k, v) in &self.witnesses {
                render_witness(k, v, &mut out);
            }
        }
        if !self.checks.is_empty() {
            let mut t = Table::new("checks", &["check", "result"]);
            for (k, v) in &self.checks {
                let r = match v {
                    Value::Bool(true) => "pass".to_string(),
                    Value::Bool(false) => "FAIL".to_string(),
                    other => plain(other),
                };
                t.push(vec![k.clone(), r]);
            }
            out.push('\n');
            t.render(&mut out);
        }
        if !self.timings.is_empty() {
            out.push_str("\ntimings (us)\n");
            for (k, v) in &self.timings {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_witness(name: &str, v: &Value, out: &mut String) {
    let rows = v.as_array().filter(|rows| !rows.is_empty() && rows.iter().all(Value::is_array));
    match rows {
        Some(rows) => {
            out.push_str(&format!("  {name}:\n"));
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.as_array().expect("row").iter().map(plain).collect())
                .collect();
            let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
            let width: Vec<usize> = (0..cols)
                .map(|c| cells.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
                .collect();
            for r in &cells {
                let line: Vec<String> = r.iter().zip(&width).map(|(s, w)| format!("{s:>w$}", w = *w)).collect();
                out.push_str(&format!("    [ {} ]\n", line.join("  ")));
            }
        }
        None => out.push_str(&format!("  {name}: {}\n", plain(v))),
    }
}

/// The published record schema; [`Record::parse`] accepts exactly the
/// documents it describes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub dims: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub checks: Map<String, Value>,
    pub timings: Map<String, Value>,
}

impl Record {
    pub fn parse(text: &str) -> CliResult<Record> {
        let r: Record = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(CliError::schema(
                "$.schema_version",
                format!("unsupported version {}", r.schema_version),
            ));
        }
        for (k, v) in &r.dims {
            let ok = v.as_array().is_some_and(|a| a.iter().all(Value::is_u64));
            if !ok {
                return Err(CliError::schema(&format!("$.dims.{k}"), "expected an array of dimensions"));
            }
        }
        if let Some(k) = r.checks.iter().find(|(_, v)| !v.is_boolean()).map(|(k, _)| k) {
            return Err(CliError::schema(&format!("$.checks.{k}"), "expected a boolean"));
        }
        if let Some(k) = r.timings.iter().find(|(_, v)| !v.is_u64()).map(|(k, _)| k) {
            return Err(CliError::schema(&format!("$.timings.{k}"), "expected microseconds"));
        }
        Ok(r)
    }
}

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_dense().iter().map(|r| vector(r)).collect())
}
