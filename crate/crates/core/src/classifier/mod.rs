//! Soft multi-label scores and the classifiers that produce them.

mod external;
mod mlknn;

use ndarray::Array2;

use crate::error::{Error, Result};

pub use external::load_external_scores;
pub use mlknn::{fit_mlknn, MlKnnModel, DEFAULT_K, DEFAULT_SMOOTHING};

/// Per-instance, per-label scores in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix(Array2<f64>);

impl ScoreMatrix {
    pub fn new(scores: Array2<f64>) -> Result<Self> {
        if let Some(((i, j), v)) = scores
            .indexed_iter()
            .find(|(_, v)| !(**v >= 0.0 && **v <= 1.0))
        {
            return Err(Error::invalid(format!(
                "score {v} at row {}, column {} is outside [0, 1]",
                i + 1,
                j + 1
            )));
        }
        Ok(ScoreMatrix(scores))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[[row, col]]
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    /// Rows `indices` in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> ScoreMatrix {
        ScoreMatrix(self.0.select(ndarray::Axis(0), indices))
    }

    pub(crate) fn from_trusted(scores: Array2<f64>) -> Self {
        debug_assert!(scores.iter().all(|v| (0.0..=1.0).contains(v)));
        ScoreMatrix(scores)
    }
}
