//! CSV point clouds and file digests.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rtd_core::PointCloud;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Reads one point per row. Every row must have the same number of finite
/// decimal values.
pub fn read_cloud(path: &Path, header: bool) -> Result<PointCloud, CliError> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let parse_error = |row: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        row,
        message,
    };

    let mut points: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line());
            parse_error(row, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line());
        let mut point = Vec::with_capacity(record.len());
        for (col, token) in record.iter().enumerate() {
            let value: f64 = token
                .parse()
                .map_err(|_| parse_error(row, format!("column {}: not a number: {token:?}", col + 1)))?;
            if !value.is_finite() {
                return Err(parse_error(row, format!("column {}: non-finite value {token:?}", col + 1)));
            }
            point.push(value);
        }
        if let Some(first) = points.first() {
            if first.len() != point.len() {
                return Err(parse_error(
                    row,
                    format!("expected {} columns, found {}", first.len(), point.len()),
                ));
            }
        }
        points.push(point);
    }
    if points.is_empty() {
        return Err(parse_error(0, "no points".into()));
    }
    PointCloud::new(points).map_err(|e| parse_error(0, e.to_string()))
}

/// Writes one point per row using the shortest representation that reads
/// back to the same `f64`.
pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<(), CliError> {
    let unwritable = |source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(unwritable)?);
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", row.join(",")).map_err(unwritable)?;
    }
    out.flush().map_err(unwritable)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(sha256_hex(&bytes))
}
