//! Tabular output: CSV (default), a JSON mirror, and gnuplot-style plot
//! data with a `.meta.json` sidecar. All renderings are deterministic for a
//! fixed table.

use std::path::Path;

use crate::{CliError, Format};

/// One fully materialized result table.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// A cell: text, a number, or absent (rendered empty / null).
#[derive(Clone, Debug)]
pub enum Value {
    Str(String),
    Num(f64),
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Num(v) => format_num(*v),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Str(s) => serde_json::Value::String(s.clone()),
            Value::Num(v) => serde_json::json!(v),
            Value::Missing => serde_json::Value::Null,
        }
    }
}

/// Shortest round-trip decimal; keeps CSV output byte-stable.
fn format_num(v: f64) -> String {
    format!("{v}")
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Value::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&serde_json::json!({
            "columns": self.columns,
            "rows": rows,
        }))
        .expect("tables serialize");
        text.push('\n');
        text
    }

    /// Gnuplot-style whitespace-separated columns with a `#` header.
    pub fn to_plot_data(&self) -> String {
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&self.columns.join(" "));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|v| {
                    let s = v.csv();
                    if s.is_empty() {
                        "nan".to_string()
                    } else {
                        s
                    }
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Write plot data plus its `.meta.json` sidecar recording the resolved
/// configuration and the library version.
pub fn write_plot_data(
    path: &Path,
    table: &Table,
    config_pairs: &[(String, String)],
) -> Result<(), CliError> {
    std::fs::write(path, table.to_plot_data())?;
    let config: serde_json::Map<String, serde_json::Value> = config_pairs
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let meta = serde_json::json!({
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".meta.json");
    let mut text = serde_json::to_string_pretty(&meta).expect("meta serializes");
    text.push('\n');
    std::fs::write(sidecar, text)?;
    Ok(())
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
    }
}
