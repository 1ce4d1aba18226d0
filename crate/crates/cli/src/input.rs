use std::path::Path;

use structenc::metric_learning::LabeledDataset;

use crate::{CliError, EXIT_DATA};

#[derive(Clone, Debug)]
pub struct PointRow {
    /// 1-based line number in the file.
    pub line: usize,
    pub raw: Vec<String>,
    pub values: Result<Vec<f64>, String>,
}

#[derive(Clone, Debug)]
pub struct PointTable {
    pub columns: Vec<String>,
    pub rows: Vec<PointRow>,
}

impl PointTable {
    pub fn numeric(&self) -> Result<Vec<Vec<f64>>, String> {
        self.rows.iter().map(|r| r.values.clone()).collect()
    }
}

fn parse_error(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::new(EXIT_DATA, format!("{}:{line}: {msg}", path.display()))
}

/// Reads a CSV whose header is `x1,...,xd` optionally followed by `label`.
/// A `label` column is dropped. With `raw_only`, cells are kept as text
/// (bit strings) and a per-row numeric parse is not required.
pub fn read_points(path: &Path, raw_only: bool) -> Result<PointTable, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let header = reader.headers().map_err(|e| parse_error(path, 1, e))?.clone();
    let label_col = header.iter().position(|h| h == "label");
    let columns: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_col)
        .map(|(_, h)| h.to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e)
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let raw: Vec<String> = record
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_col)
            .map(|(_, c)| c.to_string())
            .collect();
        let values = raw
            .iter()
            .map(|c| c.parse::<f64>().map_err(|_| format!("not a number: {c:?}")))
            .collect::<Result<Vec<f64>, String>>();
        if !raw_only {
            if let Err(msg) = &values {
                return Err(parse_error(path, line, msg));
            }
        }
        rows.push(PointRow { line, raw, values });
    }
    Ok(PointTable { columns, rows })
}

/// Reads a labelled dataset with header `x,label`.
pub fn read_dataset(path: &Path) -> Result<LabeledDataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let header = reader.headers().map_err(|e| parse_error(path, 1, e))?.clone();
    let x_col = header.iter().position(|h| h == "x").ok_or_else(|| parse_error(path, 1, "missing column x"))?;
    let l_col = header
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| parse_error(path, 1, "missing column label"))?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e)
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let x: f64 = record[x_col].parse().map_err(|_| parse_error(path, line, "x is not a number"))?;
        let l: i8 = record[l_col]
            .parse()
            .map_err(|_| parse_error(path, line, "label must be 1 or -1"))?;
        points.push(x);
        labels.push(l);
    }
    LabeledDataset::new(points, labels).map_err(|e| CliError::new(EXIT_DATA, format!("{}: {e}", path.display())))
}
