use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::classifier::ScoreMatrix;
use crate::error::{Error, Result};

pub const FALLBACK_LOWER: f64 = 0.3;
pub const FALLBACK_UPPER: f64 = 0.7;

/// How a pair of thresholds was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdSource {
    Fitted { mean: f64, std_dev: f64 },
    Fallback,
    Fixed,
}

/// Lower and upper borders of the region of uncertainty. They are also the
/// feet of the S-shaped membership curve fitted to the scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertaintyThresholds {
    pub lower: f64,
    pub upper: f64,
    pub source: ThresholdSource,
}

impl CertaintyThresholds {
    pub fn fixed(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && lower < 0.5) {
            return Err(Error::invalid(format!(
                "lower threshold {lower} must be in (0, 0.5)"
            )));
        }
        if !(upper > 0.5 && upper < 1.0) {
            return Err(Error::invalid(format!(
                "upper threshold {upper} must be in (0.5, 1)"
            )));
        }
        Ok(CertaintyThresholds {
            lower,
            upper,
            source: ThresholdSource::Fixed,
        })
    }

    /// Zadeh S-function with feet `lower` and `upper`.
    pub fn membership(&self, x: f64) -> f64 {
        let (a, b) = (self.lower, self.upper);
        let mid = 0.5 * (a + b);
        if x <= a {
            0.0
        } else if x <= mid {
            2.0 * ((x - a) / (b - a)).powi(2)
        } else if x < b {
            1.0 - 2.0 * ((x - b) / (b - a)).powi(2)
        } else {
            1.0
        }
    }
}

/// Feet from the score distribution: `a = clamp(mean - sd, 0.05, 0.45)`,
/// `b = clamp(mean + sd, 0.55, 0.95)` over all entries. A constant matrix
/// falls back to (0.3, 0.7).
pub fn fit_thresholds(scores: &ScoreMatrix) -> CertaintyThresholds {
    fit_from_values(scores.as_array())
}

fn fit_from_values(values: &Array2<f64>) -> CertaintyThresholds {
    let first = values.iter().next().copied();
    let distinct = first.is_some_and(|f| values.iter().any(|&v| v != f));
    if !distinct {
        log::warn!(
            "score matrix has fewer than two distinct values; using thresholds ({FALLBACK_LOWER}, {FALLBACK_UPPER})"
        );
        return CertaintyThresholds {
            lower: FALLBACK_LOWER,
            upper: FALLBACK_UPPER,
            source: ThresholdSource::Fallback,
        };
    }
    let n = values.len() as f64;
    let mean = values.sum() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std_dev = var.sqrt();
    from_moments(mean, std_dev)
}

pub(crate) fn from_moments(mean: f64, std_dev: f64) -> CertaintyThresholds {
    CertaintyThresholds {
        lower: (mean - std_dev).clamp(0.05, 0.45),
        upper: (mean + std_dev).clamp(0.55, 0.95),
        source: ThresholdSource::Fitted { mean, std_dev },
    }
}
