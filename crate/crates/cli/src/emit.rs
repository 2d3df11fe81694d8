//! Tabular report emission: CSV (RFC 4180 quoting, LF endings) and JSON
//! with stable column names. Floating values print with 17 significant
//! digits in both formats, so emit -> parse -> re-emit is byte-identical.

use anyhow::{Context, Result};
#[cfg(test)]
use anyhow::bail;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Str(s) => csv_quote(s),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Str(s) => json_quote(s),
        }
    }
}

/// 17 significant digits; enough to reproduce any f64 exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
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

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"name\": {},", json_quote(&self.name));
        let cols: Vec<String> = self.columns.iter().map(|c| json_quote(c)).collect();
        let _ = writeln!(out, "  \"columns\": [{}],", cols.join(", "));
        out.push_str("  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Cell::json).collect();
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{}", cells.join(", "), comma);
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// Parse the JSON produced by `to_json` back into a table. Numbers with
    /// a fractional exponent form become floats, plain integers stay ints.
    #[cfg(test)]
    pub fn from_json(text: &str) -> Result<Table> {
        let value: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
        let name = value["name"]
            .as_str()
            .context("missing table name")?
            .to_string();
        let columns = value["columns"]
            .as_array()
            .context("missing columns")?
            .iter()
            .map(|c| c.as_str().map(str::to_string).context("bad column"))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        for row in value["rows"].as_array().context("missing rows")? {
            let mut cells = Vec::new();
            for cell in row.as_array().context("bad row")? {
                let parsed = match cell {
                    serde_json::Value::Number(n) => {
                        if let Some(i) = n.as_i64() {
                            Cell::Int(i)
                        } else {
                            Cell::Float(n.as_f64().context("bad number")?)
                        }
                    }
                    serde_json::Value::String(s) => Cell::Str(s.clone()),
                    other => bail!("unsupported cell {other}"),
                };
                cells.push(parsed);
            }
            rows.push(cells);
        }
        Ok(Table {
            name,
            columns,
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn emit(table: &Table, format: Format, out: Option<&std::path::Path>) -> Result<()> {
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
