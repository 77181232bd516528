//! Rendering of a command result as human text, JSON or CSV.

use std::io::Write;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// One command's output: an echo of its configuration, flat-or-nested rows,
/// and the human rendering. `failure` is set when the command must exit 1.
pub struct Report {
    pub config: Value,
    pub rows: Vec<Value>,
    pub human: String,
    pub failure: Option<String>,
}

impl Report {
    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<(), CliError> {
        match format {
            Format::Human => out.write_all(self.human.as_bytes())?,
            Format::Json => {
                let mut top = Map::new();
                top.insert("config".into(), self.config.clone());
                top.insert("rows".into(), Value::Array(self.rows.clone()));
                serde_json::to_writer_pretty(&mut *out, &Value::Object(top))?;
                writeln!(out)?;
            }
            Format::Csv => write_csv(&self.rows, out)?,
        }
        Ok(())
    }
}

/// Nested objects become dotted column names.
fn flatten(prefix: &str, v: &Value, into: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, into);
            }
        }
        Value::String(s) => into.push((prefix.to_string(), s.clone())),
        Value::Null => into.push((prefix.to_string(), String::new())),
        other => into.push((prefix.to_string(), other.to_string())),
    }
}

fn write_csv(rows: &[Value], out: &mut impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Option<Vec<String>> = None;
    for row in rows {
        let mut cells = Vec::new();
        flatten("", row, &mut cells);
        if header.is_none() {
            let h: Vec<String> = cells.iter().map(|c| c.0.clone()).collect();
            w.write_record(&h)?;
            header = Some(h);
        }
        w.write_record(cells.iter().map(|c| &c.1))?;
    }
    w.flush()?;
    Ok(())
}
