//! Multi-label evaluation measures.

use std::fmt::Write as _;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::classifier::ScoreMatrix;
use crate::error::{Error, Result};

pub const METRIC_NAMES: [&str; 7] = [
    "hamming_loss",
    "ranking_loss",
    "one_error",
    "subset_accuracy",
    "macro_f1",
    "micro_f1",
    "accuracy",
];

/// Higher is better for these; the remaining three are losses.
pub const HIGHER_IS_BETTER: [bool; 7] = [false, false, false, true, true, true, true];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub hamming_loss: f64,
    pub ranking_loss: f64,
    pub one_error: f64,
    pub subset_accuracy: f64,
    pub macro_f1: f64,
    pub micro_f1: f64,
    pub accuracy: f64,
}

impl EvaluationReport {
    pub fn values(&self) -> [f64; 7] {
        [
            self.hamming_loss,
            self.ranking_loss,
            self.one_error,
            self.subset_accuracy,
            self.macro_f1,
            self.micro_f1,
            self.accuracy,
        ]
    }

    fn from_values(v: [f64; 7]) -> Self {
        EvaluationReport {
            hamming_loss: v[0],
            ranking_loss: v[1],
            one_error: v[2],
            subset_accuracy: v[3],
            macro_f1: v[4],
            micro_f1: v[5],
            accuracy: v[6],
        }
    }

    pub fn csv_header() -> String {
        METRIC_NAMES.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out
    }

    /// Metrics on which `self` is strictly better than `other`.
    pub fn improvements_over(&self, other: &EvaluationReport) -> Vec<&'static str> {
        self.values()
            .iter()
            .zip(other.values())
            .enumerate()
            .filter(|(i, (a, b))| {
                if HIGHER_IS_BETTER[*i] {
                    **a > *b
                } else {
                    **a < *b
                }
            })
            .map(|(i, _)| METRIC_NAMES[i])
            .collect()
    }
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp == 0 {
        0.0
    } else {
        2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
    }
}

/// Computes all seven measures. Instances with no relevant (or no
/// irrelevant) label are skipped for ranking loss; instances with no
/// relevant label are skipped for one-error.
pub fn evaluate(
    pred: &Array2<u8>,
    scores: &ScoreMatrix,
    truth: &Array2<u8>,
) -> Result<EvaluationReport> {
    if pred.dim() != truth.dim() || scores.as_array().dim() != truth.dim() {
        return Err(Error::Dimension(format!(
            "predictions {:?}, scores {:?} and truth {:?} must agree",
            pred.dim(),
            scores.as_array().dim(),
            truth.dim()
        )));
    }
    if truth.iter().chain(pred.iter()).any(|&v| v > 1) {
        return Err(Error::invalid("label matrices must be binary"));
    }
    let (m, c) = truth.dim();
    if m == 0 || c == 0 {
        return Err(Error::invalid("cannot evaluate an empty matrix"));
    }
    let s = scores.as_array();

    let mut mismatches = 0usize;
    let mut exact = 0usize;
    let mut jaccard = 0.0;
    let mut rl_sum = 0.0;
    let mut rl_n = 0usize;
    let mut oe_err = 0usize;
    let mut oe_n = 0usize;
    let mut tp = vec![0usize; c];
    let mut fp = vec![0usize; c];
    let mut fn_ = vec![0usize; c];

    for i in 0..m {
        let (p, t, sc) = (pred.row(i), truth.row(i), s.row(i));
        let mut inter = 0;
        let mut union = 0;
        let mut row_mismatch = 0;
        for j in 0..c {
            match (p[j], t[j]) {
                (1, 1) => {
                    tp[j] += 1;
                    inter += 1;
                    union += 1;
                }
                (1, 0) => {
                    fp[j] += 1;
                    union += 1;
                    row_mismatch += 1;
                }
                (0, 1) => {
                    fn_[j] += 1;
                    union += 1;
                    row_mismatch += 1;
                }
                _ => {}
            }
        }
        mismatches += row_mismatch;
        if row_mismatch == 0 {
            exact += 1;
        }
        jaccard += if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        };

        let relevant: Vec<usize> = (0..c).filter(|&j| t[j] == 1).collect();
        let irrelevant: Vec<usize> = (0..c).filter(|&j| t[j] == 0).collect();
        if !relevant.is_empty() {
            oe_n += 1;
            // first label with the maximal score
            let top = (0..c).fold(0, |best, j| if sc[j] > sc[best] { j } else { best });
            if t[top] == 0 {
                oe_err += 1;
            }
            if !irrelevant.is_empty() {
                let mut bad = 0.0;
                for &r in &relevant {
                    for &q in &irrelevant {
                        if sc[r] < sc[q] {
                            bad += 1.0;
                        } else if sc[r] == sc[q] {
                            bad += 0.5;
                        }
                    }
                }
                rl_sum += bad / (relevant.len() * irrelevant.len()) as f64;
                rl_n += 1;
            }
        }
    }

    let macro_f1 = (0..c).map(|j| f1(tp[j], fp[j], fn_[j])).sum::<f64>() / c as f64;
    let micro_f1 = f1(tp.iter().sum(), fp.iter().sum(), fn_.iter().sum());
    Ok(EvaluationReport {
        hamming_loss: mismatches as f64 / (m * c) as f64,
        ranking_loss: if rl_n == 0 { 0.0 } else { rl_sum / rl_n as f64 },
        one_error: if oe_n == 0 { 0.0 } else { oe_err as f64 / oe_n as f64 },
        subset_accuracy: exact as f64 / m as f64,
        macro_f1,
        micro_f1,
        accuracy: jaccard / m as f64,
    })
}

/// Per-metric arithmetic mean.
pub fn aggregate(reports: &[EvaluationReport]) -> Result<EvaluationReport> {
    if reports.is_empty() {
        return Err(Error::invalid("no reports to aggregate"));
    }
    let mut acc = [0.0; 7];
    for r in reports {
        for (a, v) in acc.iter_mut().zip(r.values()) {
            *a += v;
        }
    }
    let n = reports.len() as f64;
    Ok(EvaluationReport::from_values(acc.map(|v| v / n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn perfect_prediction() {
        let y = array![[1u8, 0, 1], [0, 1, 0]];
        let s = ScoreMatrix::new(array![[0.9, 0.1, 0.8], [0.2, 0.7, 0.1]]).unwrap();
        let r = evaluate(&y, &s, &y).unwrap();
        assert_eq!(r.hamming_loss, 0.0);
        assert_eq!(r.subset_accuracy, 1.0);
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
        assert_eq!(r.micro_f1, 1.0);
    }

    #[test]
    fn ranking_tie_counts_half() {
        let t = array![[1u8, 0]];
        let s = ScoreMatrix::new(array![[0.5, 0.5]]).unwrap();
        let r = evaluate(&t, &s, &t).unwrap();
        assert_eq!(r.ranking_loss, 0.5);
    }

    #[test]
    fn empty_truth_conventions() {
        let t = array![[0u8, 0], [1, 0]];
        let p = array![[0u8, 0], [1, 0]];
        let s = ScoreMatrix::new(array![[0.9, 0.1], [0.1, 0.9]]).unwrap();
        let r = evaluate(&p, &s, &t).unwrap();
        // row 0 skipped for OE and RL, row 1 ranks the wrong label first
        assert_eq!(r.one_error, 1.0);
        assert_eq!(r.ranking_loss, 1.0);
        assert_eq!(r.accuracy, 1.0);
    }

    #[test]
    fn never_predicted_label_scores_zero_f1() {
        let t = array![[1u8, 1], [0, 1]];
        let p = array![[0u8, 1], [0, 1]];
        let s = ScoreMatrix::new(array![[0.4, 0.9], [0.1, 0.9]]).unwrap();
        let r = evaluate(&p, &s, &t).unwrap();
        assert_eq!(r.macro_f1, 0.5);
        assert!((r.micro_f1 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn shape_and_binary_checks() {
        let t = array![[1u8, 0]];
        let s = ScoreMatrix::new(array![[0.5, 0.5, 0.1]]).unwrap();
        assert!(evaluate(&t, &s, &t).is_err());
        let s = ScoreMatrix::new(array![[0.5, 0.5]]).unwrap();
        assert!(evaluate(&t, &s, &array![[2u8, 0]]).is_err());
    }

    #[test]
    fn aggregation() {
        let base = EvaluationReport::from_values([0.2, 0.1, 0.3, 0.4, 0.5, 0.6, 0.7]);
        assert_eq!(aggregate(&[base]).unwrap(), base);
        let other = EvaluationReport {
            hamming_loss: 0.4,
            ..base
        };
        assert!((aggregate(&[base, other]).unwrap().hamming_loss - 0.3).abs() < 1e-15);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn improvement_direction() {
        let a = EvaluationReport::from_values([0.1, 0.1, 0.1, 0.5, 0.5, 0.5, 0.5]);
        let b = EvaluationReport::from_values([0.2, 0.1, 0.0, 0.4, 0.5, 0.6, 0.4]);
        assert_eq!(
            a.improvements_over(&b),
            vec!["hamming_loss", "subset_accuracy", "accuracy"]
        );
    }

    #[test]
    fn csv_row_shape() {
        let r = EvaluationReport::from_values([0.25, 0.0, 1.0, 0.5, 0.5, 0.5, 0.5]);
        assert_eq!(r.csv_row(), "0.25,0,1,0.5,0.5,0.5,0.5");
        assert_eq!(EvaluationReport::csv_header().split(',').count(), 7);
    }
}
