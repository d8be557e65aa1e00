//! Contingency matrix CSV: a header row of column indices (`c0,c1,...`)
//! followed by `k1` rows of `k2` integer counts.

use std::path::Path;

use cluster_pair_core::ContingencyMatrix;

use crate::error::{Error, Result};

pub fn write_contingency(m: &ContingencyMatrix, path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::Csv { path: path.into(), source: e })?;
    let header: Vec<String> = (0..m.k2()).map(|j| format!("c{j}")).collect();
    writer
        .write_record(&header)
        .map_err(|e| Error::Csv { path: path.into(), source: e })?;
    for i in 0..m.k1() {
        let row: Vec<String> = m.row(i).iter().map(|c| c.to_string()).collect();
        writer
            .write_record(&row)
            .map_err(|e| Error::Csv { path: path.into(), source: e })?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn read_contingency(path: &Path) -> Result<ContingencyMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Csv { path: path.into(), source: e })?;
    let k2 = reader
        .headers()
        .map_err(|e| Error::Csv { path: path.into(), source: e })?
        .len();
    let mut counts: Vec<u64> = Vec::new();
    let mut k1 = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv { path: path.into(), source: e })?;
        let line = record.position().map_or(0, |p| p.line());
        for field in record.iter() {
            let value: u64 = field.trim().parse().map_err(|e| {
                Error::parse(path, line, format!("bad count `{field}`: {e}"))
            })?;
            counts.push(value);
        }
        k1 += 1;
    }
    if k1 == 0 {
        return Err(Error::parse(path, 0, "matrix has no rows"));
    }
    Ok(ContingencyMatrix::from_counts(counts, k1, k2)?)
}
