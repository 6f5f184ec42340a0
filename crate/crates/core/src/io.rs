//! CSV and JSON file formats.
//!
//! Datasets are plain CSV, one point per row, `d` numeric columns. A header
//! row is auto-detected (any non-numeric field in the first row). Weights,
//! when present, are an extra trailing column selected by the caller.
//! All floats are written with 17 significant digits so outputs are
//! reproducible byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::data::{Dataset, WeightedDataset};
use crate::{Error, Result};

/// Formats a float with 17 significant digits, round-trip exact.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one CSV row of floats.
fn write_row<W: Write>(w: &mut W, row: &[f64]) -> Result<()> {
    let cells: Vec<String> = row.iter().map(|&x| fmt_g17(x)).collect();
    writeln!(w, "{}", cells.join(","))?;
    Ok(())
}

/// Parses CSV text into rows of floats, skipping an auto-detected header.
fn parse_numeric_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|cell| cell.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(e) => {
                // Only the first row may fail to parse: that is the header.
                if rows.is_empty() && lineno == 0 {
                    continue;
                }
                return Err(Error::Csv { line: lineno + 1, msg: e.to_string() });
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Invalid("csv contains no data rows".into()));
    }
    Ok(rows)
}

/// Loads a dataset from CSV. With `weights_col` the trailing column is taken
/// as per-point weight; otherwise all weights are 1.
pub fn load_dataset(path: &Path, weights_col: bool) -> Result<WeightedDataset> {
    let text = fs::read_to_string(path)?;
    let rows = parse_numeric_csv(&text)?;
    if weights_col {
        if rows[0].len() < 2 {
            return Err(Error::Invalid("weight column requires at least 2 csv columns".into()));
        }
        let mut points = Vec::with_capacity(rows.len());
        let mut weights = Vec::with_capacity(rows.len());
        for mut row in rows {
            let w = row.pop().expect("checked width");
            points.push(row);
            weights.push(w);
        }
        WeightedDataset::new(Dataset::new(points)?, weights)
    } else {
        Ok(WeightedDataset::uniform(Dataset::new(rows)?))
    }
}

/// Writes points as headerless CSV, one row per point.
pub fn write_points_csv(path: &Path, points: &[Vec<f64>]) -> Result<()> {
    let mut buf = Vec::new();
    for p in points {
        write_row(&mut buf, p)?;
    }
    fs::write(path, buf)?;
    Ok(())
}

/// Writes a weighted dataset with the weight as the trailing column.
pub fn write_weighted_csv(path: &Path, data: &WeightedDataset) -> Result<()> {
    let mut buf = Vec::new();
    for j in 0..data.len() {
        let mut row = data.point(j).to_vec();
        row.push(data.weight(j));
        write_row(&mut buf, &row)?;
    }
    fs::write(path, buf)?;
    Ok(())
}
