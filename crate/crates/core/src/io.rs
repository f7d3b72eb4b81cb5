//! CSV and JSON artifacts.
//!
//! Floats in CSV files are written with 17 significant digits so every
//! value round-trips exactly. CSV files use LF line endings; point and grid
//! files carry a header row, matrix files do not. JSON documents are
//! emitted with sorted keys.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{KreinError, Result};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a headerless, comma-separated, row-major square matrix.
pub fn matrix_from_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| {
                    KreinError::Parse(format!("line {}: {:?} is not a number", lineno + 1, f.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(KreinError::Parse(format!(
                    "line {}: ragged row with {} fields, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(KreinError::Parse("matrix file is empty".into()));
    }
    if rows[0].len() != n {
        return Err(KreinError::Parse(format!("matrix is {}x{}, not square", n, rows[0].len())));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(KreinError::Parse("matrix has non-finite entries".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>> {
    matrix_from_csv(&fs::read_to_string(path)?)
}

pub fn write_matrix_csv(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    Ok(fs::write(path, matrix_to_csv(m))?)
}

/// CSV with a header and one row per record.
pub fn records_to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `px,py,label` rows.
pub fn dataset_csv(points: &[[f64; 2]], labels: &[i8]) -> String {
    records_to_csv(
        &["px", "py", "label"],
        points.iter().zip(labels).map(|(p, l)| vec![fmt_f64(p[0]), fmt_f64(p[1]), l.to_string()]),
    )
}

/// `px,py,score` rows.
pub fn grid_csv(points: &[[f64; 2]], scores: &[f64]) -> String {
    records_to_csv(
        &["px", "py", "score"],
        points.iter().zip(scores).map(|(p, s)| vec![fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(*s)]),
    )
}

/// Parses a `px,py,label` file back into points and labels.
pub fn dataset_from_csv(text: &str) -> Result<(Vec<[f64; 2]>, Vec<i8>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "px,py,label" => {}
        other => return Err(KreinError::Parse(format!("expected header px,py,label, got {other:?}"))),
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || KreinError::Parse(format!("line {}: malformed record {line:?}", i + 2));
        if fields.len() != 3 {
            return Err(bad());
        }
        let px: f64 = fields[0].parse().map_err(|_| bad())?;
        let py: f64 = fields[1].parse().map_err(|_| bad())?;
        let label: i8 = fields[2].parse().map_err(|_| bad())?;
        if label != 1 && label != -1 {
            return Err(bad());
        }
        points.push([px, py]);
        labels.push(label);
    }
    Ok((points, labels))
}

/// Pretty JSON with keys sorted at every level, newline-terminated.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered by key
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    Ok(fs::write(path, to_sorted_json(value)?)?)
}
