//! Dataset serialization. Both formats carry the same numbers: CSV writes
//! `{:.16e}` (17 significant digits, round-trips exactly), JSON writes the
//! same `f64`s natively, with `null` standing in for non-finite values.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const TOOL: &str = concat!("brillouin-tap ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if *x > 0.0 => "inf".into(),
            Cell::Num(_) => "-inf".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
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

/// One command's output plus everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Row-level problems; any entry makes the run exit nonzero.
    pub failures: Vec<String>,
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: {TOOL}");
        let _ = writeln!(s, "# command: {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for f in &self.failures {
            let _ = writeln!(s, "# failure: {f}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let parameters: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "tool": TOOL,
            "command": self.command,
            "parameters": parameters,
            "columns": self.columns,
            "rows": rows,
            "failures": self.failures,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes to `path`, or stdout when `None`.
    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).context("writing to stdout")?;
                out.flush().context("writing to stdout")
            }
        }
    }
}

/// Reads the data rows of a CSV produced by [`Dataset::to_csv`], skipping
/// comments and the header. Non-numeric cells become `NaN`.
pub fn parse_csv_numbers(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        Dataset {
            command: "test",
            parameters: vec![("E", "5.0".into())],
            columns: vec!["name", "x", "n"],
            rows: vec![
                vec!["a".into(), 0.1.into(), 3usize.into()],
                vec!["b".into(), f64::INFINITY.into(), 0usize.into()],
            ],
            failures: vec![],
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        assert!(!csv.contains('\r'));
        assert!(csv.starts_with("# tool: brillouin-tap "));
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, ["name,x,n", "a,1.0000000000000001e-1,3", "b,inf,0"]);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-300, f64::MAX, 5e-324, -7.25] {
            let s = Cell::Num(x).csv();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_uses_null_for_non_finite() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["rows"][0][1], json!(0.1));
        assert!(v["rows"][1][1].is_null());
        assert_eq!(v["parameters"]["E"], json!("5.0"));
    }
}
