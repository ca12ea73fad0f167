//! Flat-file datasets: CSV with a header row and JSON with `metadata` and `rows`.
//!
//! CSV numbers carry 17 significant digits and empty cells stand for missing
//! values, so both formats round-trip bit for bit.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::LatticeParams;
use crate::sweep::{SpectrumRow, Units};

pub const SPECTRUM_COLUMNS: [&str; 6] = ["K", "E_band_min", "E_band_max", "E_dimer", "E_binding", "alpha"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub params: LatticeParams,
    pub units: Units,
    pub timestamp_unix: u64,
    pub tool_version: String,
    pub columns: Vec<String>,
    #[serde(default)]
    pub extra: BTreeMap<String, Value>,
}

impl Metadata {
    pub fn new(command: &str, params: LatticeParams, units: Units, timestamp_unix: u64, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            params,
            units,
            timestamp_unix,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            extra: BTreeMap::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

/// Seconds since the Unix epoch, or zero when `frozen`.
pub fn timestamp(frozen: bool) -> u64 {
    if frozen {
        return 0;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Column-oriented numeric table; `None` is a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Metadata,
    pub rows: Vec<Vec<Option<f64>>>,
}

fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(metadata: Metadata, rows: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let width = metadata.columns.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::Parse(format!("row {bad} has {} cells, expected {width}", rows[bad].len())));
        }
        Ok(Self { metadata, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.metadata.columns
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns().iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        writer.write_record(self.columns()).map_err(csv_err)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|cell| cell.map(format_number).unwrap_or_default()))
                .map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a CSV table; metadata other than the column names is taken from `metadata`.
    pub fn from_csv(text: &str, mut metadata: Metadata) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        metadata.columns = reader.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|record| {
                record.map_err(csv_err)?.iter().map(parse_cell).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(metadata, rows)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns()
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), v.map(Value::from).unwrap_or(Value::Null)))
                    .collect();
                Value::Object(object)
            })
            .collect();
        let mut top = Map::new();
        top.insert("metadata".into(), serde_json::to_value(&self.metadata).map_err(json_err)?);
        top.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).map_err(json_err)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Document {
            metadata: Metadata,
            rows: Vec<Map<String, Value>>,
        }
        let doc: Document = serde_json::from_str(text).map_err(json_err)?;
        let rows = doc
            .rows
            .iter()
            .map(|object| {
                doc.metadata
                    .columns
                    .iter()
                    .map(|c| match object.get(c) {
                        None | Some(Value::Null) => Ok(None),
                        Some(v) => v
                            .as_f64()
                            .map(Some)
                            .ok_or_else(|| Error::Parse(format!("column {c}: {v} is not a number"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.metadata, rows)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, format: Format, path: &Path) -> Result<()> {
        write_atomic(path, &self.render(format)?)
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_cell(cell: &str) -> Result<Option<f64>> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Parse(format!("malformed number {cell:?}")))
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so a failed write never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Two-particle spectrum versus center-of-mass momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDataset {
    pub metadata: Metadata,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumDataset {
    pub fn to_table(&self) -> Table {
        let rows = self
            .rows
            .iter()
            .map(|r| vec![Some(r.k), Some(r.e_band_min), Some(r.e_band_max), r.e_dimer, r.e_binding, r.alpha])
            .collect();
        Table { metadata: self.metadata.clone(), rows }
    }

    pub fn from_table(table: &Table) -> Result<Self> {
        if table.columns() != SPECTRUM_COLUMNS {
            return Err(Error::Parse(format!("unexpected spectrum columns {:?}", table.columns())));
        }
        let required = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::Parse(format!("{name} is required")));
        let rows = table
            .rows
            .iter()
            .map(|r| {
                Ok(SpectrumRow {
                    k: required(r[0], "K")?,
                    e_band_min: required(r[1], "E_band_min")?,
                    e_band_max: required(r[2], "E_band_max")?,
                    e_dimer: r[3],
                    e_binding: r[4],
                    alpha: r[5],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { metadata: table.metadata.clone(), rows })
    }

    /// Checks that momenta increase strictly and that every dimer energy obeys
    /// `E^2 = U^2 + (E_band_max)^2` (i.e. `U^2 + 4 J_K^2`) to 1e-12 relative.
    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.rows.windows(2).find(|w| w[0].k.partial_cmp(&w[1].k) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::Parse(format!("K not strictly increasing at {}", w[1].k)));
        }
        let u = self.metadata.units.energy(self.metadata.params.u, &self.metadata.params);
        for r in &self.rows {
            if let Some(e) = r.e_dimer {
                let expected = u * u + r.e_band_max * r.e_band_max;
                if (e * e - expected).abs() > 1e-12 * expected {
                    return Err(Error::Parse(format!("row K = {}: E_dimer^2 = {} != {}", r.k, e * e, expected)));
                }
            }
        }
        Ok(())
    }
}
