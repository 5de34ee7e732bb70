use std::io::Write;

use anyhow::Result;
use serde_json::Value;

use crate::config::Format;

/// A flat view of a report, for `--output csv`.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub fn emit(out: impl Write, format: Format, json: &Value, table: &Table) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, json)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.headers)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
