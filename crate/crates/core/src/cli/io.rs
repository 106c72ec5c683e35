//! Flat-file formats.
//!
//! Matrices are headerless CSV, one row per sample, every value written with
//! 17 significant digits so it reads back bit-exact. Partition files hold one
//! 1-based integer fold label per line.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};

fn parse_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => parse_err(path, format!("{other:?}")),
        })?;
    let mut values = Vec::new();
    let mut n_cols = None;
    let mut n_rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match n_cols {
            None => n_cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(parse_err(
                    path,
                    format!("line {} has {} fields, expected {c}", i + 1, record.len()),
                ))
            }
            _ => {}
        }
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(path, format!("line {}: cannot parse {field:?}", i + 1)))?;
            values.push(v);
        }
        n_rows += 1;
    }
    let n_cols = n_cols.ok_or_else(|| parse_err(path, "file is empty"))?;
    Matrix::from_shape_vec((n_rows, n_cols), values).map_err(|e| parse_err(path, e.to_string()))
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_matrix_csv(path: &Path, m: &Matrix) -> Result<()> {
    let mut out = String::with_capacity(m.len() * 24);
    for row in m.rows() {
        let fields: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_partition(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(path, format!("line {}: {l:?} is not a fold label", i + 1)))
        })
        .collect()
}

pub fn write_partition(path: &Path, labels: &[usize]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for l in labels {
        writeln!(f, "{l}")?;
    }
    Ok(())
}

/// One `fold,statistic,v1,...` line.
pub(crate) fn stats_line(fold: usize, name: &str, v: &Vector) -> String {
    let mut s = format!("{fold},{name}");
    for &x in v {
        s.push(',');
        s.push_str(&format_value(x));
    }
    s
}
