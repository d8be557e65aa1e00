//! Structured result records.
//!
//! One record per (dataset type, method). JSON reports are JSON Lines and
//! CSV reports carry a header only when the file is fresh, so repeated
//! harness invocations can append to the same path.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

/// One method's result on one dataset type. The seed and every matcher
/// parameter ride along so any number in a report can be regenerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema_version: u32,
    pub dataset_type: String,
    pub method: String,
    pub iterations: u64,
    pub base_seed: Option<u64>,
    pub proposer: Option<String>,
    pub timing_scope: String,
    pub timing_warmup: u64,
    pub run_time_seconds: Option<f64>,
    pub accuracy_mean: Option<f64>,
    pub accuracy_std: Option<f64>,
    /// True when the accuracy is normalized against the best heuristic
    /// rather than measured against the exact optimum.
    pub normalized: bool,
    /// Denominator of the accuracy ratio, e.g. `mwm` or `max(smbp,mmm)`.
    pub baseline: Option<String>,
    pub timed_out: bool,
    pub time_limit_seconds: Option<f64>,
    pub error: Option<String>,
}

/// Appends records to `path`; existing records are left untouched.
pub fn write_report(records: &[ReportRecord], path: &Path, format: ReportFormat) -> Result<()> {
    let existing = std::fs::metadata(path).map(|m| m.len()).unwrap_or(0);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    match format {
        ReportFormat::Json => {
            let mut out = std::io::BufWriter::new(file);
            for record in records {
                let line = serde_json::to_string(record)
                    .map_err(|e| Error::Json { path: path.into(), source: e })?;
                writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
            }
            out.flush().map_err(|e| Error::io(path, e))
        }
        ReportFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(existing == 0)
                .from_writer(file);
            for record in records {
                writer
                    .serialize(record)
                    .map_err(|e| Error::Csv { path: path.into(), source: e })?;
            }
            writer.flush().map_err(|e| Error::io(path, e))
        }
    }
}

pub fn read_report(path: &Path, format: ReportFormat) -> Result<Vec<ReportRecord>> {
    match format {
        ReportFormat::Json => {
            let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
            let reader = BufReader::new(file);
            let mut records = Vec::new();
            for line in reader.lines() {
                let line = line.map_err(|e| Error::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                records.push(
                    serde_json::from_str(&line)
                        .map_err(|e| Error::Json { path: path.into(), source: e })?,
                );
            }
            Ok(records)
        }
        ReportFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .from_path(path)
                .map_err(|e| Error::Csv { path: path.into(), source: e })?;
            let mut records = Vec::new();
            for record in reader.deserialize() {
                records.push(record.map_err(|e| Error::Csv { path: path.into(), source: e })?);
            }
            Ok(records)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(method: &str, accuracy: Option<f64>) -> ReportRecord {
        ReportRecord {
            schema_version: REPORT_SCHEMA_VERSION,
            dataset_type: "both-balanced".into(),
            method: method.into(),
            iterations: 50,
            base_seed: Some(42),
            proposer: (method == "smbp").then(|| "row".into()),
            timing_scope: "pairing-only".into(),
            timing_warmup: 1,
            run_time_seconds: Some(0.0123456),
            accuracy_mean: accuracy,
            accuracy_std: accuracy.map(|_| 0.00438),
            normalized: false,
            baseline: Some("mwm".into()),
            timed_out: false,
            time_limit_seconds: None,
            error: None,
        }
    }

    #[test]
    fn json_and_csv_roundtrip_identically() {
        let records = vec![sample("smbp", Some(0.9823)), sample("mwm", Some(1.0))];
        let dir = tempfile::tempdir().unwrap();
        let json_path = dir.path().join("report.jsonl");
        let csv_path = dir.path().join("report.csv");
        write_report(&records, &json_path, ReportFormat::Json).unwrap();
        write_report(&records, &csv_path, ReportFormat::Csv).unwrap();
        assert_eq!(read_report(&json_path, ReportFormat::Json).unwrap(), records);
        assert_eq!(read_report(&csv_path, ReportFormat::Csv).unwrap(), records);
    }

    #[test]
    fn appending_keeps_existing_records() {
        let dir = tempfile::tempdir().unwrap();
        for format in [ReportFormat::Json, ReportFormat::Csv] {
            let path = dir.path().join(format!("report.{format:?}"));
            write_report(&[sample("smbp", Some(0.98))], &path, format).unwrap();
            write_report(&[sample("mmm", None)], &path, format).unwrap();
            let records = read_report(&path, format).unwrap();
            assert_eq!(records.len(), 2);
            assert_eq!(records[0].method, "smbp");
            assert_eq!(records[1].method, "mmm");
        }
    }

    #[test]
    fn timed_out_record_roundtrips_absent_accuracy() {
        let mut record = sample("mwm", None);
        record.timed_out = true;
        record.time_limit_seconds = Some(7200.0);
        record.run_time_seconds = None;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_report(std::slice::from_ref(&record), &path, ReportFormat::Csv).unwrap();
        assert_eq!(read_report(&path, ReportFormat::Csv).unwrap(), vec![record]);
    }
}
