//! Label file reading and writing.
//!
//! The primary interchange is line-oriented: one label per line, UTF-8, LF.
//! A CSV column reader is provided so ground-truth columns can be pulled
//! straight out of raw dataset files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use cluster_pair_core::{validate_clustering, Clustering};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to pull labels out of a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelFormat {
    /// One label per line.
    #[default]
    Lines,
    /// One column of a delimited file.
    CsvColumn {
        column: ColumnSpec,
        /// Whether the first row is a header. Name-based columns require it.
        has_header: bool,
    },
}

/// A CSV column, by 0-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnSpec {
    Index(usize),
    Name(String),
}

/// Raw labels in file order.
///
/// Lines that all spell canonical integers are kept as integers; anything
/// else falls back to text labels. The canonical-form check (a parsed value
/// must print back to the original token) keeps the fallback lossless, so
/// the partition structure never depends on which representation was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawLabels {
    Ints(Vec<i64>),
    Texts(Vec<String>),
}

impl RawLabels {
    pub fn len(&self) -> usize {
        match self {
            RawLabels::Ints(v) => v.len(),
            RawLabels::Texts(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Remaps to a dense clustering by order of first occurrence.
    pub fn to_clustering(&self) -> Result<Clustering> {
        let c = match self {
            RawLabels::Ints(v) => validate_clustering(v)?,
            RawLabels::Texts(v) => validate_clustering(v)?,
        };
        Ok(c)
    }
}

/// Accumulates tokens, holding integers for as long as every token is a
/// canonical integer.
struct TokenSink {
    ints: Vec<i64>,
    texts: Vec<String>,
    all_int: bool,
}

impl TokenSink {
    fn new() -> Self {
        Self { ints: Vec::new(), texts: Vec::new(), all_int: true }
    }

    fn push(&mut self, token: &str) {
        if self.all_int {
            if let Ok(v) = token.parse::<i64>() {
                if v.to_string() == token {
                    self.ints.push(v);
                    return;
                }
            }
            // canonical-int run ends; re-materialize earlier tokens
            self.all_int = false;
            self.texts = self.ints.iter().map(|v| v.to_string()).collect();
            self.ints = Vec::new();
        }
        self.texts.push(token.to_string());
    }

    fn finish(self) -> RawLabels {
        if self.all_int {
            RawLabels::Ints(self.ints)
        } else {
            RawLabels::Texts(self.texts)
        }
    }
}

/// Reads raw labels in file order, streaming with constant memory per row.
pub fn read_labels(path: &Path, format: &LabelFormat) -> Result<RawLabels> {
    match format {
        LabelFormat::Lines => read_lines(path),
        LabelFormat::CsvColumn { column, has_header } => read_csv_column(path, column, *has_header),
    }
}

fn read_lines(path: &Path) -> Result<RawLabels> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut sink = TokenSink::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let token = line.trim();
        if token.is_empty() {
            return Err(Error::parse(path, idx as u64 + 1, "empty label"));
        }
        sink.push(token);
    }
    let labels = sink.finish();
    if labels.is_empty() {
        return Err(Error::parse(path, 0, "file contains no labels"));
    }
    Ok(labels)
}

fn read_csv_column(path: &Path, column: &ColumnSpec, has_header: bool) -> Result<RawLabels> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Csv { path: path.into(), source: e })?;

    let col = match column {
        ColumnSpec::Index(i) => *i,
        ColumnSpec::Name(name) => {
            if !has_header {
                return Err(Error::InvalidInput(format!(
                    "column `{name}` needs a header row to resolve"
                )));
            }
            let headers = reader
                .headers()
                .map_err(|e| Error::Csv { path: path.into(), source: e })?;
            headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::InvalidInput(format!("column `{name}` not found in {}", path.display()))
            })?
        }
    };

    let mut sink = TokenSink::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv { path: path.into(), source: e })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = record.get(col).ok_or_else(|| {
            Error::parse(path, line, format!("row has no column {col}"))
        })?;
        let token = field.trim();
        if token.is_empty() {
            return Err(Error::parse(path, line, "empty label"));
        }
        sink.push(token);
    }
    let labels = sink.finish();
    if labels.is_empty() {
        return Err(Error::parse(path, 0, "file contains no labels"));
    }
    Ok(labels)
}

/// Writes one 0-based label per line, newline-terminated, so that reading
/// the file back yields the identical sequence.
pub fn write_labels(c: &Clustering, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for &label in c.labels() {
        writeln!(writer, "{label}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Reads an `n x d` feature matrix from a delimited file of numbers.
///
/// A first row that does not parse as numbers is treated as a header and
/// skipped.
pub fn read_features(path: &Path) -> Result<cluster_pair_core::FeatureDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Csv { path: path.into(), source: e })?;
    let mut points: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv { path: path.into(), source: e })?;
        let line = record.position().map_or(idx as u64 + 1, |p| p.line());
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => {
                if row.is_empty() {
                    return Err(Error::parse(path, line, "empty feature row"));
                }
                match dim {
                    None => dim = Some(row.len()),
                    Some(d) if d != row.len() => {
                        return Err(Error::parse(
                            path,
                            line,
                            format!("expected {d} features, found {}", row.len()),
                        ));
                    }
                    _ => {}
                }
                points.extend(row);
            }
            Err(e) => {
                if idx == 0 {
                    continue; // header row
                }
                return Err(Error::parse(path, line, format!("bad number: {e}")));
            }
        }
    }
    let d = dim.ok_or_else(|| Error::parse(path, 0, "file contains no feature rows"))?;
    Ok(cluster_pair_core::FeatureDataset::new(points, d)?)
}
