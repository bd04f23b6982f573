//! Report rows and their CSV / JSON encodings.
//!
//! Numbers are rounded to 12 significant digits once, when a row is built, so
//! both encodings carry the same values. CSV prints the shortest decimal that
//! round-trips the rounded value; JSON does the same through serde_json.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::ser::{Serialize, SerializeMap, Serializer};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
    Bool(bool),
    Null,
}

/// Round to [`SIGNIFICANT_DIGITS`]; non-finite values become null.
pub fn round_sig(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation parses back");
    // normalize -0
    Some(if rounded == 0.0 { 0.0 } else { rounded })
}

impl Value {
    pub fn num(x: f64) -> Self {
        round_sig(x).map_or(Value::Null, Value::Num)
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Value::Null, Value::num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format_num(*x),
            Value::Text(s) => quote(s),
            Value::Bool(b) => b.to_string(),
            Value::Null => String::new(),
        }
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn format_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Payloads are plain labels; quoting only guards against stray delimiters.
fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Num(x) => s.serialize_f64(*x),
            Value::Text(t) => s.serialize_str(t),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Null => s.serialize_none(),
        }
    }
}

/// One output record. Column order is insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportRow {
    cells: Vec<(&'static str, Value)>,
}

impl ReportRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, column: &'static str, value: Value) -> Self {
        self.push(column, value);
        self
    }

    pub fn push(&mut self, column: &'static str, value: Value) {
        debug_assert!(self.get(column).is_none(), "duplicate column {column}");
        self.cells.push((column, value));
    }

    pub fn columns(&self) -> Vec<&'static str> {
        self.cells.iter().map(|(c, _)| *c).collect()
    }

    pub fn get(&self, column: &str) -> Option<&Value> {
        self.cells
            .iter()
            .find(|(c, _)| *c == column)
            .map(|(_, v)| v)
    }
}

impl Serialize for ReportRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.cells.len()))?;
        for (c, v) in &self.cells {
            map.serialize_entry(c, v)?;
        }
        map.end()
    }
}

/// Header from the first row; every row must share its columns.
pub fn write_csv(rows: &[ReportRow], out: &mut dyn Write) -> io::Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let header = first.columns();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.columns(), header);
        let line: Vec<String> = row.cells.iter().map(|(_, v)| v.csv()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_json(rows: &[ReportRow], out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, rows)?;
    writeln!(out)
}

pub fn write_rows(rows: &[ReportRow], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_digits() {
        assert_eq!(round_sig(13.0 / 28.0), Some(0.464285714286));
        assert_eq!(round_sig(-0.0), Some(0.0));
        assert_eq!(round_sig(1.0), Some(1.0));
        assert_eq!(round_sig(f64::NAN), None);
        assert_eq!(round_sig(123456789.0123456), Some(123456789.012));
    }

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let rows = vec![ReportRow::new()
            .with("d_g", Value::num(0.9))
            .with("p", Value::num(1.0 / 3.0))
            .with("label", Value::text("DQ;QD"))
            .with("missing", Value::Null)];
        let mut csv = Vec::new();
        write_csv(&rows, &mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "d_g,p,label,missing\n0.9,0.333333333333,DQ;QD,\n"
        );
        let mut json = Vec::new();
        write_json(&rows, &mut json).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(parsed[0]["p"].as_f64(), Some(0.333333333333));
        assert!(parsed[0]["missing"].is_null());
        // keys keep column order
        let text = String::from_utf8(json).unwrap();
        assert!(text.find("d_g").unwrap() < text.find("label").unwrap());
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_num(0.0), "0");
        assert_eq!(format_num(-0.593406593407), "-0.593406593407");
        assert_eq!(format_num(5.55111512313e-16), "5.55111512313e-16");
        assert_eq!(format_num(1e-12), "1e-12");
        assert_eq!(
            "5.55111512313e-16".parse::<f64>().unwrap(),
            5.55111512313e-16
        );
    }

    #[test]
    fn fields_with_delimiters_are_quoted() {
        assert_eq!(quote("DQ;QD"), "DQ;QD");
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn empty_csv_is_empty() {
        let mut out = Vec::new();
        write_csv(&[], &mut out).unwrap();
        assert!(out.is_empty());
    }
}
