use std::path::Path;

use crate::error::{Error, Result};
use crate::io::read_numeric_table;

use super::ScoreMatrix;

/// Reads an `M x C` score CSV produced by any other classifier. Returns the
/// header too when `has_header` is set.
pub fn load_external_scores(
    path: impl AsRef<Path>,
    expected_labels: usize,
    has_header: bool,
) -> Result<(ScoreMatrix, Option<Vec<String>>)> {
    let path = path.as_ref();
    let table = read_numeric_table(path, has_header)?;
    if table.values.ncols() != expected_labels {
        return Err(Error::Dimension(format!(
            "{}: expected {expected_labels} score columns, found {}",
            path.display(),
            table.values.ncols()
        )));
    }
    let scores = ScoreMatrix::new(table.values)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok((scores, table.header))
}
