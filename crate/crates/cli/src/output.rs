//! Tabular artifacts and their CSV / JSON encodings.
//!
//! Floats are written with Rust's `Debug` formatting, which is the shortest
//! string that parses back to the same bits (at most 17 significant digits)
//! and switches to exponent notation only for very small or large
//! magnitudes. Missing values are empty CSV fields or JSON `null`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::CliError;

pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.map(format_f64).unwrap_or_default()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let bad = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut table = Table::new(header);
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|field| {
                    if field.is_empty() {
                        Ok(None)
                    } else {
                        field
                            .parse()
                            .map(Some)
                            .map_err(|_| CliError::Usage(format!("csv: `{field}` is not a number")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_json(&self, meta: &Meta) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            #[serde(flatten)]
            meta: &'a Meta,
            columns: &'a [String],
            rows: &'a [Vec<Option<f64>>],
        }
        let mut out = serde_json::to_string(&Doc {
            meta,
            columns: &self.header,
            rows: &self.rows,
        })
        .expect("table serializes");
        out.push('\n');
        out
    }
}

/// Identifies the state family in JSON artifacts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub system: String,
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
}
