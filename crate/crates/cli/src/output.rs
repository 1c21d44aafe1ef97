//! Structured command output: one JSON document, or its `results` rows as
//! CSV or an aligned text table.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

/// Integers beyond this magnitude are written as decimal strings.
const SAFE_INTEGER: i64 = (1 << 53) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Nothing to verify.
    Ok,
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "OK",
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub input: Map<String, Value>,
    pub results: Vec<Value>,
    pub weight_box: Option<String>,
    pub degree_cap: Option<usize>,
    pub verdict: Verdict,
}

pub fn int(v: i64) -> Value {
    if v.abs() > SAFE_INTEGER {
        Value::String(v.to_string())
    } else {
        Value::from(v)
    }
}

pub fn ints(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|&x| int(x)).collect())
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "results": self.results,
            "certification": { "box": self.weight_box, "degree_cap": self.degree_cap },
            "verdict": self.verdict.as_str(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    /// Column names: the union of the keys of every row, in sorted order.
    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> =
            self.results.iter().filter_map(Value::as_object).flat_map(|m| m.keys().cloned()).collect();
        cols.sort();
        cols.dedup();
        cols
    }

    fn cells(&self, cols: &[String]) -> Vec<Vec<String>> {
        self.results
            .iter()
            .map(|row| cols.iter().map(|c| row.get(c).map(cell).unwrap_or_default()).collect())
            .collect()
    }

    fn csv(&self) -> String {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).expect("in-memory write");
        for row in self.cells(&cols) {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells")
    }

    fn table(&self) -> String {
        let cols = self.columns();
        let rows = self.cells(&cols);
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(k, c)| rows.iter().map(|r| r[k].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut s = String::new();
        writeln!(s, "{} {}", self.command, self.verdict.as_str()).unwrap();
        if !cols.is_empty() {
            writeln!(s, "{}", line(&cols)).unwrap();
            for r in &rows {
                writeln!(s, "{}", line(r)).unwrap();
            }
        }
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
