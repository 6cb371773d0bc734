//! CSV datasets and plain numeric matrices.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};

/// Loads a CSV with a header row whose last `label_count` columns are
/// binary labels. Header names of those columns become the label names.
pub fn load_csv(path: impl AsRef<Path>, label_count: usize) -> Result<MultiLabelDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_dataset(file, label_count, path)
}

pub(crate) fn read_csv_dataset<R: std::io::Read>(
    reader: R,
    label_count: usize,
    path: &Path,
) -> Result<MultiLabelDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::parse(path, 1, "no data rows"));
    }
    if label_count == 0 || label_count >= header.len() {
        return Err(Error::invalid(format!(
            "label count {label_count} must be in [1, {}) for {} columns",
            header.len(),
            header.len()
        )));
    }
    let n_features = header.len() - label_count;

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::parse(
                path,
                line,
                format!("expected {} columns, found {}", header.len(), record.len()),
            ));
        }
        for (j, cell) in record.iter().enumerate() {
            if j < n_features {
                let v = if cell == "?" || cell.is_empty() {
                    f64::NAN
                } else {
                    cell.parse::<f64>().map_err(|_| {
                        Error::parse(
                            path,
                            line,
                            format!("non-numeric value '{cell}' in column '{}'", header[j]),
                        )
                    })?
                };
                features.push(v);
            } else {
                let v = match cell {
                    "0" => 0,
                    "1" => 1,
                    _ => {
                        return Err(Error::parse(
                            path,
                            line,
                            format!("non-binary value '{cell}' in label column '{}'", header[j]),
                        ))
                    }
                };
                labels.push(v);
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::parse(path, 2, "no data rows"));
    }
    MultiLabelDataset::new(
        Array2::from_shape_vec((rows, n_features), features).expect("feature buffer"),
        Array2::from_shape_vec((rows, label_count), labels).expect("label buffer"),
        header[..n_features].to_vec(),
        header[n_features..].to_vec(),
    )
}

/// A numeric matrix read from CSV, with its header when present.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Option<Vec<String>>,
    pub values: Array2<f64>,
}

pub fn read_numeric_table(path: impl AsRef<Path>, has_header: bool) -> Result<NumericTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = if has_header {
        Some(
            rdr.headers()
                .map_err(|e| Error::parse(path, 1, e.to_string()))?
                .iter()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let first_line = if has_header { 2 } else { 1 };
    let mut width = header.as_ref().map(Vec::len);
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in rdr.records().enumerate() {
        let line = i + first_line;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::parse(
                path,
                line,
                format!("expected {w} columns, found {}", record.len()),
            ));
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                Error::parse(path, line, format!("non-numeric value '{cell}' in column {}", j + 1))
            })?;
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::parse(path, first_line, "no data rows"));
    }
    let cols = width.unwrap_or(0);
    Ok(NumericTable {
        header,
        values: Array2::from_shape_vec((rows, cols), values).expect("table buffer"),
    })
}

/// Writes a matrix as CSV with a header row. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_matrix<T: std::fmt::Display>(
    path: impl AsRef<Path>,
    header: &[String],
    values: &Array2<T>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in values.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}
