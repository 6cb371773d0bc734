//! Rule-driven correction of uncertain scores and final hardening.
//!
//! Scores outside `[lower, upper]` are certain and never modified. For every
//! instance, each rule whose antecedent labels are all certain with the
//! matching polarity (certain-relevant for CP, certain-irrelevant for CA)
//! shifts the uncertain consequent scores by
//!
//! ```text
//! delta = confidence * d(y) / max(d(x), 1e-6),   d(v) = min(v, 1 - v)
//! ```
//!
//! upward for CP and downward for CA, clamped to `[0, 1]` after each step.
//! `d(x)` is the largest boundary distance among the antecedent labels.

mod thresholds;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::ScoreMatrix;
use crate::error::{Error, Result};
use crate::mining::{AssociationRule, Polarity};

pub use thresholds::{
    fit_thresholds, CertaintyThresholds, ThresholdSource, FALLBACK_LOWER, FALLBACK_UPPER,
};

pub const DELTA_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    Relevant,
    Irrelevant,
    Uncertain,
}

/// Per-cell certainty tags.
#[derive(Debug, Clone, PartialEq)]
pub struct CertaintyPartition(Array2<Certainty>);

impl CertaintyPartition {
    pub fn tag(&self, row: usize, col: usize) -> Certainty {
        self.0[[row, col]]
    }

    pub fn tags(&self) -> &Array2<Certainty> {
        &self.0
    }

    pub fn uncertain_count(&self) -> usize {
        self.0.iter().filter(|&&t| t == Certainty::Uncertain).count()
    }
}

/// Strict comparisons: a score equal to a threshold is uncertain.
pub fn partition(scores: &ScoreMatrix, thr: &CertaintyThresholds) -> CertaintyPartition {
    CertaintyPartition(scores.as_array().mapv(|s| {
        if s > thr.upper {
            Certainty::Relevant
        } else if s < thr.lower {
            Certainty::Irrelevant
        } else {
            Certainty::Uncertain
        }
    }))
}

/// Distance of a score from its nearest boundary (0 or 1).
pub fn boundary_distance(score: f64) -> f64 {
    score.min(1.0 - score)
}

pub fn compute_delta(confidence: f64, y_score: f64, x_distance: f64) -> f64 {
    confidence * boundary_distance(y_score) / x_distance.max(DELTA_EPSILON)
}

/// One rule application on one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    pub instance: usize,
    pub label: usize,
    /// Position of the rule in the rule list passed to [`apply_rules`].
    pub rule: usize,
    pub polarity: Polarity,
    /// Antecedent label whose boundary distance set the denominator.
    pub governing_label: usize,
    pub delta: f64,
    pub before: f64,
    pub after: f64,
}

/// Every rule application, in instance order and application order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrectionTrace {
    pub entries: Vec<TraceEntry>,
}

impl CorrectionTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Re-applies the recorded deltas to `original`.
    pub fn replay(&self, original: &ScoreMatrix) -> ScoreMatrix {
        let mut out = original.as_array().clone();
        for e in &self.entries {
            let cell = &mut out[[e.instance, e.label]];
            *cell = step(*cell, e.delta, e.polarity);
        }
        ScoreMatrix::from_trusted(out)
    }

    /// Tab separated audit log with label names.
    pub fn to_tsv(&self, label_names: &[String]) -> String {
        let mut out = String::from("instance\tlabel\trule\tpolarity\tgoverning_label\tdelta\tbefore\tafter\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                e.instance,
                label_names.get(e.label).map_or("?", String::as_str),
                e.rule,
                e.polarity,
                label_names.get(e.governing_label).map_or("?", String::as_str),
                e.delta,
                e.before,
                e.after
            );
        }
        out
    }

    pub fn write_tsv(&self, path: impl AsRef<Path>, label_names: &[String]) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv(label_names)).map_err(|e| Error::io(path, e))
    }

    pub fn summary(&self, uncertain_cells: usize) -> CorrectionSummary {
        let applications = self.entries.len();
        let mut cells: Vec<(usize, usize)> =
            self.entries.iter().map(|e| (e.instance, e.label)).collect();
        cells.sort_unstable();
        cells.dedup();
        let saturated = self
            .entries
            .iter()
            .filter(|e| (e.after == 0.0 || e.after == 1.0) && e.before != e.after)
            .count();
        let over_unit = self.entries.iter().filter(|e| e.delta > 1.0).count();
        let (sum, max) = self
            .entries
            .iter()
            .fold((0.0, 0.0f64), |(s, m), e| (s + e.delta, m.max(e.delta)));
        CorrectionSummary {
            uncertain_cells,
            applications,
            cells_touched: cells.len(),
            saturated_applications: saturated,
            deltas_above_one: over_unit,
            mean_delta: if applications == 0 { 0.0 } else { sum / applications as f64 },
            max_delta: max,
        }
    }
}

/// Aggregate figures about a correction pass, used to diagnose saturation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionSummary {
    pub uncertain_cells: usize,
    pub applications: usize,
    pub cells_touched: usize,
    pub saturated_applications: usize,
    pub deltas_above_one: usize,
    pub mean_delta: f64,
    pub max_delta: f64,
}

fn step(score: f64, delta: f64, polarity: Polarity) -> f64 {
    match polarity {
        Polarity::CoPresence => (score + delta).clamp(0.0, 1.0),
        Polarity::CoAbsence => (score - delta).clamp(0.0, 1.0),
    }
}

fn fires(rule: &AssociationRule, tags: ndarray::ArrayView1<Certainty>) -> bool {
    let wanted = match rule.polarity {
        Polarity::CoPresence => Certainty::Relevant,
        Polarity::CoAbsence => Certainty::Irrelevant,
    };
    rule.antecedent
        .members()
        .iter()
        .all(|&l| tags.get(l) == Some(&wanted))
}

fn correct_row(
    instance: usize,
    original: ndarray::ArrayView1<f64>,
    tags: ndarray::ArrayView1<Certainty>,
    rules: &[AssociationRule],
) -> (Vec<f64>, Vec<TraceEntry>) {
    let mut row = original.to_vec();
    let mut trace = Vec::new();
    for (rule_idx, rule) in rules.iter().enumerate() {
        if !fires(rule, tags) {
            continue;
        }
        // Weakest premise governs: largest distance from a boundary.
        let (governing_label, x_distance) = rule
            .antecedent
            .members()
            .iter()
            .map(|&l| (l, boundary_distance(original[l])))
            .fold((usize::MAX, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        let mut targets: Vec<usize> = rule
            .consequent
            .members()
            .iter()
            .copied()
            .filter(|&l| tags.get(l) == Some(&Certainty::Uncertain))
            .collect();
        // Most ambiguous (closest to 0.5) first.
        targets.sort_by(|&a, &b| {
            (original[a] - 0.5)
                .abs()
                .total_cmp(&(original[b] - 0.5).abs())
                .then(a.cmp(&b))
        });
        for label in targets {
            let before = row[label];
            let delta = compute_delta(rule.confidence, before, x_distance);
            let after = step(before, delta, rule.polarity);
            row[label] = after;
            trace.push(TraceEntry {
                instance,
                label,
                rule: rule_idx,
                polarity: rule.polarity,
                governing_label,
                delta,
                before,
                after,
            });
        }
    }
    (row, trace)
}

/// Applies `rules` (already cleaned and ordered) to the uncertain cells of
/// `scores`. Certainty tags come from `partition` and stay frozen for the
/// whole pass.
pub fn apply_rules(
    scores: &ScoreMatrix,
    partition: &CertaintyPartition,
    rules: &[AssociationRule],
) -> Result<(ScoreMatrix, CorrectionTrace)> {
    if partition.0.dim() != scores.as_array().dim() {
        return Err(Error::Dimension(format!(
            "partition is {:?} but scores are {:?}",
            partition.0.dim(),
            scores.as_array().dim()
        )));
    }
    let c = scores.cols();
    if let Some(r) = rules.iter().find(|r| {
        r.antecedent.members().iter().chain(r.consequent.members()).any(|&l| l >= c)
    }) {
        return Err(Error::Dimension(format!(
            "rule {r} references a label beyond the {c} score columns"
        )));
    }
    let values = scores.as_array();
    let rows: Vec<(Vec<f64>, Vec<TraceEntry>)> = (0..scores.rows())
        .into_par_iter()
        .map(|i| correct_row(i, values.row(i), partition.0.row(i), rules))
        .collect();
    let mut out = Array2::zeros(values.dim());
    let mut entries = Vec::new();
    for (i, (row, trace)) in rows.into_iter().enumerate() {
        out.row_mut(i).assign(&ndarray::Array1::from(row));
        entries.extend(trace);
    }
    Ok((ScoreMatrix::from_trusted(out), CorrectionTrace { entries }))
}

/// Partition with `thr`, then apply `rules`.
pub fn correct(
    scores: &ScoreMatrix,
    rules: &[AssociationRule],
    thr: &CertaintyThresholds,
) -> Result<(ScoreMatrix, CorrectionTrace, CertaintyPartition)> {
    let part = partition(scores, thr);
    let (corrected, trace) = apply_rules(scores, &part, rules)?;
    Ok((corrected, trace, part))
}

/// Label is relevant iff its score is at least 0.5.
pub fn harden(scores: &ScoreMatrix) -> Array2<u8> {
    scores.as_array().mapv(|s| u8::from(s >= 0.5))
}
