//! Tabular experiment results with unit-annotated columns, plus the CSV and
//! JSON writers. Output is byte-stable: identical tables serialize to
//! identical bytes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExpError;

/// One table value. Axis values keep their natural type so round-trips are
/// exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Str(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // Rust's float Display is the shortest round-trip decimal.
            Cell::Num(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Str(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Str(_) => None,
        }
    }
}

/// Column descriptor; `unit` may be empty for dimensionless or textual
/// columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }

    fn header(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{}[{}]", self.name, self.unit)
        }
    }
}

/// Provenance recorded with every result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub seed: u64,
    pub config_hash: String,
    pub tool_version: String,
    /// Design-decision defaults that were filled in while loading the config.
    pub defaults_applied: Vec<String>,
}

/// Rectangular result set of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: TableMetadata,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

/// Requested serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

impl ResultTable {
    pub fn new(metadata: TableMetadata, columns: Vec<Column>) -> Self {
        Self {
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column schema"
        );
        self.rows.push(row);
    }

    /// Index of a column by name, ignoring units.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// CSV bytes: `name[unit]` headers, RFC 4180 quoting, LF line endings.
    /// Seed, config hash, and tool version ride along as trailing columns so
    /// the file is self-describing.
    pub fn to_csv_bytes(&self) -> Result<Vec<u8>, ExpError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header: Vec<String> = self.columns.iter().map(|c| c.header()).collect();
        header.extend(["seed", "config_hash", "tool_version"].map(String::from));
        writer
            .write_record(&header)
            .map_err(|e| ExpError::Serialize(e.to_string()))?;
        let provenance = [
            self.metadata.seed.to_string(),
            self.metadata.config_hash.clone(),
            self.metadata.tool_version.clone(),
        ];
        for row in &self.rows {
            let mut record: Vec<String> = row.iter().map(Cell::render).collect();
            record.extend(provenance.iter().cloned());
            writer
                .write_record(&record)
                .map_err(|e| ExpError::Serialize(e.to_string()))?;
        }
        writer
            .into_inner()
            .map_err(|e| ExpError::Serialize(e.to_string()))
    }

    /// JSON bytes: an object with `metadata`, `columns`, and `rows`.
    pub fn to_json_bytes(&self) -> Result<Vec<u8>, ExpError> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .map_err(|e| ExpError::Serialize(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, ExpError> {
        serde_json::from_slice(bytes).map_err(|e| ExpError::Serialize(e.to_string()))
    }
}

/// Serializes the table to `path` in the requested format.
pub fn write_results(
    table: &ResultTable,
    format: OutputFormat,
    path: &Path,
) -> Result<(), ExpError> {
    let bytes = match format {
        OutputFormat::Csv => table.to_csv_bytes()?,
        OutputFormat::Json => table.to_json_bytes()?,
    };
    let mut file = std::fs::File::create(path).map_err(|e| ExpError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    file.write_all(&bytes).map_err(|e| ExpError::Io {
        path: path.display().to_string(),
        source: e,
    })
}
