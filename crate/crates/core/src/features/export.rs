use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use super::{format_real, parse_rational, ColumnDescriptor, Entries, FeatureMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Jsonl,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "jsonl" => Ok(ExportFormat::Jsonl),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

impl ExportFormat {
    /// Guesses from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => ExportFormat::Jsonl,
            _ => ExportFormat::Csv,
        }
    }

    pub fn write(self, m: &FeatureMatrix, out: impl Write) -> Result<()> {
        match self {
            ExportFormat::Csv => write_csv(m, out),
            ExportFormat::Jsonl => write_jsonl(m, out),
        }
    }

    pub fn write_file(self, m: &FeatureMatrix, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write(m, &mut out)?;
        out.flush().map_err(|e| Error::io(path, e))
    }
}

/// Header `row_id,<descriptor>,...`, then one record per row. Exact values
/// are decimal strings, never exponent notation.
pub fn write_csv(m: &FeatureMatrix, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["row_id".to_string()];
    header.extend(m.columns.iter().map(ColumnDescriptor::name));
    w.write_record(&header)?;
    for (r, id) in m.row_ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend((0..m.column_count()).map(|c| m.format_entry(r, c)));
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}

/// One JSON object per row with keys in column order. Exact values are
/// strings so nothing is rounded; encoded values are numbers.
pub fn write_jsonl(m: &FeatureMatrix, mut out: impl Write) -> Result<()> {
    let names: Vec<String> = m.columns.iter().map(ColumnDescriptor::name).collect();
    for (r, id) in m.row_ids.iter().enumerate() {
        let mut obj = Map::new();
        obj.insert("row_id".into(), Value::String(id.clone()));
        for (c, name) in names.iter().enumerate() {
            let v = match &m.entries {
                Entries::Exact(_) => Value::String(m.format_entry(r, c)),
                Entries::Real(rows) => serde_json::Number::from_f64(rows[r][c])
                    .map(Value::Number)
                    .unwrap_or_else(|| Value::String(format_real(rows[r][c]))),
            };
            obj.insert(name.clone(), v);
        }
        serde_json::to_writer(&mut out, &Value::Object(obj))?;
        out.write_all(b"\n")
            .map_err(|e| Error::io("<jsonl output>", e))?;
    }
    Ok(())
}

/// Reads a CSV written by [`write_csv`]. Entries come back exact when every
/// cell parses as an integer or fraction, otherwise as reals.
pub fn read_csv(input: impl Read) -> Result<FeatureMatrix> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.get(0) != Some("row_id") {
        return Err(Error::Encoding("first CSV column must be row_id".into()));
    }
    let columns = header
        .iter()
        .skip(1)
        .map(ColumnDescriptor::parse)
        .collect::<Result<Vec<_>>>()?;
    let mut row_ids = Vec::new();
    let mut cells: Vec<Vec<String>> = Vec::new();
    for record in r.records() {
        let record = record?;
        row_ids.push(record[0].to_string());
        cells.push(record.iter().skip(1).map(str::to_string).collect());
    }
    let exact: Option<Vec<Vec<_>>> = cells
        .iter()
        .map(|row| row.iter().map(|c| parse_rational(c)).collect())
        .collect();
    let entries = match exact {
        Some(rows) => Entries::Exact(rows),
        None => Entries::Real(
            cells
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| {
                            c.parse::<f64>()
                                .map_err(|_| Error::Encoding(format!("bad CSV value {c:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(FeatureMatrix {
        row_ids,
        columns,
        entries,
        failures: Vec::new(),
    })
}
