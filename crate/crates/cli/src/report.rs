//! Tabular output: CSV and JSON writers, and the gap-table CSV reader.

use std::io;

use gapflow::determinants::GapTable;
use gapflow::{ArithContext, GapError};
use rug::Float;
use serde_json::{Map, Value};

pub const GAP_HEADER: [&str; 5] = ["k", "value", "method", "precision_bits", "meta"];

/// A table of string cells plus the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(config: Vec<(String, String)>, columns: &[&str]) -> Self {
        Self { config, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        out.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            out.write_record(row).expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }

    pub fn to_json(&self) -> String {
        let config: Map<String, Value> =
            self.config.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.clone(), Value::String(v.clone()))).collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("config".into(), Value::Object(config));
        root.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("string-only JSON");
        text.push('\n');
        text
    }

    /// Reads a CSV table (header plus rows); the config is not stored in CSV.
    pub fn from_csv(text: &str) -> Result<Self, GapError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let columns: Vec<String> = reader.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            rows.push(record.map_err(csv_error)?.iter().map(str::to_string).collect());
        }
        Ok(Self { config: Vec::new(), columns, rows })
    }
}

fn csv_error(e: csv::Error) -> GapError {
    GapError::InvalidParameter(format!("malformed CSV: {e}"))
}

/// Decimal rendering with `digits` significant digits; enough digits make
/// the text round-trip to the same binary value.
pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

/// Short rendering for diagnostics columns.
pub fn short(x: &Float) -> String {
    x.to_string_radix(10, Some(6))
}

/// One parsed row of a gap table CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub k: usize,
    pub value: Float,
    pub method: String,
    pub precision_bits: u32,
    pub meta: String,
}

impl GapRow {
    pub fn from_table(table: &GapTable) -> Vec<Self> {
        table
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| GapRow {
                k,
                value: v.clone(),
                method: table.method.to_string(),
                precision_bits: table.precision_bits,
                meta: table.meta(k),
            })
            .collect()
    }

    fn cells(&self) -> Vec<String> {
        let digits = ArithContext::new(self.precision_bits).map(|c| c.decimal_digits()).unwrap_or(20);
        vec![
            self.k.to_string(),
            decimal(&self.value, digits),
            self.method.clone(),
            self.precision_bits.to_string(),
            self.meta.clone(),
        ]
    }
}

pub fn gap_report(config: Vec<(String, String)>, rows: &[GapRow]) -> Report {
    let mut report = Report::new(config, &GAP_HEADER);
    for row in rows {
        report.push(row.cells());
    }
    report
}

/// Parses a gap table CSV back into rows, reading each value at the
/// precision recorded on its own row.
pub fn parse_gap_csv(text: &str) -> Result<Vec<GapRow>, GapError> {
    let report = Report::from_csv(text)?;
    if report.columns != GAP_HEADER {
        return Err(GapError::InvalidParameter(format!("unexpected header {:?}", report.columns)));
    }
    let bad = |what: &str, cell: &str| GapError::InvalidParameter(format!("bad {what} `{cell}`"));
    report
        .rows
        .iter()
        .map(|r| {
            let k = r[0].parse().map_err(|_| bad("k", &r[0]))?;
            let precision_bits: u32 = r[3].parse().map_err(|_| bad("precision", &r[3]))?;
            let ctx = ArithContext::new(precision_bits)?;
            let value = ctx.parse_real(&r[1])?;
            Ok(GapRow { k, value, method: r[2].clone(), precision_bits, meta: r[4].clone() })
        })
        .collect()
}

pub fn write_output(text: &str, path: Option<&std::path::Path>) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use io::Write;
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
