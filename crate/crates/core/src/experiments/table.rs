use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Output encoding of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            Cell::Text(_) => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_nan() => "NaN".into(),
            Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            // 17 significant digits round-trip every f64
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Provenance attached to every table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    /// The fully resolved input of the run.
    pub config: Value,
    /// Derived scalars such as fit results.
    pub summary: Value,
}

impl Metadata {
    pub fn new(experiment: &str, seed: Option<u64>, trials: Option<u64>, config: Value) -> Self {
        Self {
            tool: "dirnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            experiment: experiment.into(),
            seed,
            trials,
            config,
            summary: Value::Object(Default::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    metadata: Metadata,
    columns: Vec<String>,
    rows: Vec<serde_json::Map<String, Value>>,
}

fn ser_err(e: impl std::fmt::Display) -> Error {
    Error::Serialize(e.to_string())
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Table {
    pub fn new(metadata: Metadata, columns: &[&str]) -> Self {
        Self {
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, `None` for text cells.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let Some(c) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[c].as_f64()).collect()
    }

    /// CSV with a header row. Metadata goes on a single leading `#` line
    /// holding JSON.
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let meta = serde_json::to_string(&self.metadata).map_err(ser_err)?;
        write!(out, "# {meta}\r\n").map_err(io_err(Path::new("<csv>")))?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns).map_err(ser_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(ser_err)?;
        }
        w.flush().map_err(io_err(Path::new("<csv>")))?;
        Ok(())
    }

    /// `{metadata, columns, rows}` with each row an object keyed by column.
    pub fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| Ok((c.clone(), serde_json::to_value(v).map_err(ser_err)?)))
                    .collect::<Result<serde_json::Map<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let doc = JsonTable {
            metadata: self.metadata.clone(),
            columns: self.columns.clone(),
            rows,
        };
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(ser_err)?;
        writeln!(out).map_err(io_err(Path::new("<json>")))?;
        Ok(())
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn save(&self, format: Format, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let file = std::fs::File::create(p).map_err(io_err(p))?;
                let mut w = std::io::BufWriter::new(file);
                self.write(format, &mut w)?;
                w.flush().map_err(io_err(p))
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                self.write(format, &mut lock)
            }
        }
    }

    pub fn read_csv(input: &mut dyn BufRead) -> Result<Self> {
        let mut first = String::new();
        input.read_line(&mut first).map_err(io_err(Path::new("<csv>")))?;
        let meta = first
            .strip_prefix("# ")
            .ok_or_else(|| Error::Serialize("missing metadata line".into()))?;
        let metadata: Metadata = serde_json::from_str(meta.trim_end()).map_err(ser_err)?;
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let columns: Vec<String> = r.headers().map_err(ser_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(ser_err)?;
            rows.push(rec.iter().map(parse_csv_cell).collect());
        }
        Ok(Table { metadata, columns, rows })
    }

    pub fn read_json(input: &mut dyn std::io::Read) -> Result<Self> {
        let doc: JsonTable = serde_json::from_reader(input).map_err(ser_err)?;
        let rows = doc
            .rows
            .iter()
            .map(|obj| {
                doc.columns
                    .iter()
                    .map(|c| match obj.get(c) {
                        Some(Value::Null) | None => Cell::Float(f64::NAN),
                        Some(v) => serde_json::from_value(v.clone()).unwrap_or(Cell::Text(v.to_string())),
                    })
                    .collect()
            })
            .collect();
        Ok(Table {
            metadata: doc.metadata,
            columns: doc.columns,
            rows,
        })
    }
}

fn parse_csv_cell(s: &str) -> Cell {
    if let Ok(i) = s.parse::<i64>() {
        return Cell::Int(i);
    }
    match s {
        "NaN" => return Cell::Float(f64::NAN),
        "inf" => return Cell::Float(f64::INFINITY),
        "-inf" => return Cell::Float(f64::NEG_INFINITY),
        _ => {}
    }
    s.parse::<f64>().map(Cell::Float).unwrap_or_else(|_| Cell::Text(s.to_string()))
}
