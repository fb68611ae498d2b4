//! Versioned tabular output in CSV or JSON.

use std::io::Write;

use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// `None` is written as an empty CSV field and as JSON `null`.
    Float(Option<f64>),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits; non-finite values spelled `inf`, `-inf`, `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Float(None) => String::new(),
            Cell::Float(Some(v)) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(Some(v)) if v.is_finite() => json!(v),
            Cell::Float(Some(v)) => json!(format_float(*v)),
            Cell::Float(None) => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Self {
            command: command.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    /// A `#` line with the artifact and schema version, then the header row.
    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# slipstab {VERSION} schema {SCHEMA} {}", self.command)?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "version": VERSION,
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

/// Parsed table with every field as text or number, for comparing formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Number(f64),
    Null,
    Text(String),
}

fn parse_field(s: &str) -> Parsed {
    if s.is_empty() {
        return Parsed::Null;
    }
    match s {
        "nan" => Parsed::Number(f64::NAN),
        "inf" => Parsed::Number(f64::INFINITY),
        "-inf" => Parsed::Number(f64::NEG_INFINITY),
        _ => s
            .parse::<f64>()
            .map(Parsed::Number)
            .unwrap_or_else(|_| Parsed::Text(s.to_string())),
    }
}

/// Read back CSV written by [`Table::write`]: `(command, columns, rows)`.
pub fn read_csv(text: &str) -> Result<(String, Vec<String>, Vec<Vec<Parsed>>), String> {
    let (first, rest) = text.split_once('\n').ok_or("empty output")?;
    let command = first
        .rsplit(' ')
        .next()
        .ok_or("missing version line")?
        .to_string();
    if !first.starts_with("# slipstab ") {
        return Err(format!("bad version line {first:?}"));
    }
    let mut rdr = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
    let columns = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(
            rec.map_err(|e| e.to_string())?
                .iter()
                .map(parse_field)
                .collect(),
        );
    }
    Ok((command, columns, rows))
}

/// Read back JSON written by [`Table::write`].
pub fn read_json(text: &str) -> Result<(String, Vec<String>, Vec<Vec<Parsed>>), String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let command = doc["command"]
        .as_str()
        .ok_or("missing command")?
        .to_string();
    let columns = doc["columns"]
        .as_array()
        .ok_or("missing columns")?
        .iter()
        .map(|c| c.as_str().unwrap_or_default().to_string())
        .collect();
    let mut rows = Vec::new();
    for row in doc["rows"].as_array().ok_or("missing rows")? {
        let cells = row.as_array().ok_or("row is not an array")?;
        rows.push(
            cells
                .iter()
                .map(|v| match v {
                    Value::Null => Parsed::Null,
                    Value::Number(n) => Parsed::Number(n.as_f64().unwrap_or(f64::NAN)),
                    Value::Bool(b) => Parsed::Text(b.to_string()),
                    Value::String(s) => parse_field(s),
                    other => Parsed::Text(other.to_string()),
                })
                .collect(),
        );
    }
    Ok((command, columns, rows))
}
