//! ML-KNN: per-label Bayesian posterior from neighbour label tallies.

use ndarray::{Array2, ArrayView1};
use rayon::prelude::*;

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};

use super::ScoreMatrix;

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_SMOOTHING: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct MlKnnModel {
    k: usize,
    smoothing: f64,
    features: Array2<f64>,
    labels: Array2<u8>,
    /// P(H1) per label.
    prior: Vec<f64>,
    /// `[label][tally]` P(tally | H1).
    cond_relevant: Vec<Vec<f64>>,
    /// `[label][tally]` P(tally | H0).
    cond_irrelevant: Vec<Vec<f64>>,
    /// Leave-one-out neighbour tallies of the training instances.
    train_tallies: Array2<usize>,
}

fn squared_distance(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` training rows closest to `query`, nearest first,
/// distance ties broken by ascending index.
fn nearest(features: &Array2<f64>, query: ArrayView1<f64>, k: usize, exclude: Option<usize>) -> Vec<usize> {
    let mut cand: Vec<(f64, usize)> = features
        .rows()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(i, row)| (squared_distance(row, query), i))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if cand.len() > k {
        cand.select_nth_unstable_by(k - 1, cmp);
        cand.truncate(k);
    }
    cand.sort_by(cmp);
    cand.into_iter().map(|(_, i)| i).collect()
}

fn tallies(labels: &Array2<u8>, neighbours: &[usize]) -> Vec<usize> {
    let mut t = vec![0usize; labels.ncols()];
    for &n in neighbours {
        for (l, &v) in labels.row(n).iter().enumerate() {
            t[l] += v as usize;
        }
    }
    t
}

/// Fits ML-KNN with `k` neighbours and Laplace smoothing `s`.
pub fn fit_mlknn(train: &MultiLabelDataset, k: usize, s: f64) -> Result<MlKnnModel> {
    let n = train.instance_count();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!(
            "k = {k} must be in [1, {n}) for {n} training instances"
        )));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("smoothing {s} must be positive")));
    }
    if train.has_missing_features() {
        return Err(Error::invalid(
            "training features contain missing values; impute them first",
        ));
    }
    let features = train.features().clone();
    let labels = train.labels().clone();
    let c = labels.ncols();

    let prior: Vec<f64> = (0..c)
        .map(|l| {
            let count = labels.column(l).iter().filter(|&&v| v == 1).count() as f64;
            (s + count) / (2.0 * s + n as f64)
        })
        .collect();

    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| tallies(&labels, &nearest(&features, features.row(i), k, Some(i))))
        .collect();
    let mut train_tallies = Array2::zeros((n, c));
    for (i, row) in rows.iter().enumerate() {
        for (l, &t) in row.iter().enumerate() {
            train_tallies[[i, l]] = t;
        }
    }

    let mut hit = vec![vec![0usize; k + 1]; c];
    let mut miss = vec![vec![0usize; k + 1]; c];
    for i in 0..n {
        for l in 0..c {
            let t = train_tallies[[i, l]];
            if labels[[i, l]] == 1 {
                hit[l][t] += 1;
            } else {
                miss[l][t] += 1;
            }
        }
    }
    let smooth = |counts: &[usize]| -> Vec<f64> {
        let total: usize = counts.iter().sum();
        let denom = s * (k + 1) as f64 + total as f64;
        counts.iter().map(|&c| (s + c as f64) / denom).collect()
    };
    let cond_relevant = hit.iter().map(|h| smooth(h)).collect();
    let cond_irrelevant = miss.iter().map(|m| smooth(m)).collect();

    Ok(MlKnnModel {
        k,
        smoothing: s,
        features,
        labels,
        prior,
        cond_relevant,
        cond_irrelevant,
        train_tallies,
    })
}

impl MlKnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn label_count(&self) -> usize {
        self.labels.ncols()
    }

    pub fn feature_count(&self) -> usize {
        self.features.ncols()
    }

    pub fn prior(&self, label: usize) -> f64 {
        self.prior[label]
    }

    /// P(tally | label relevant).
    pub fn likelihood_relevant(&self, label: usize, tally: usize) -> f64 {
        self.cond_relevant[label][tally]
    }

    /// P(tally | label irrelevant).
    pub fn likelihood_irrelevant(&self, label: usize, tally: usize) -> f64 {
        self.cond_irrelevant[label][tally]
    }

    fn posterior(&self, label: usize, tally: usize) -> f64 {
        let p1 = self.prior[label] * self.cond_relevant[label][tally];
        let p0 = (1.0 - self.prior[label]) * self.cond_irrelevant[label][tally];
        p1 / (p1 + p0)
    }

    /// Number of relevant `label` occurrences among the `k` nearest training
    /// instances of every row of `features`.
    pub fn neighbour_tallies(&self, features: &Array2<f64>) -> Result<Array2<usize>> {
        if features.ncols() != self.features.ncols() {
            return Err(Error::Dimension(format!(
                "model expects {} features, got {}",
                self.features.ncols(),
                features.ncols()
            )));
        }
        if features.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("test features contain missing values"));
        }
        let rows: Vec<Vec<usize>> = (0..features.nrows())
            .into_par_iter()
            .map(|i| tallies(&self.labels, &nearest(&self.features, features.row(i), self.k, None)))
            .collect();
        let mut out = Array2::zeros((features.nrows(), self.label_count()));
        for (i, row) in rows.iter().enumerate() {
            for (l, &t) in row.iter().enumerate() {
                out[[i, l]] = t;
            }
        }
        Ok(out)
    }

    fn scores_from_tallies(&self, t: &Array2<usize>) -> ScoreMatrix {
        let scores = Array2::from_shape_fn(t.dim(), |(i, l)| self.posterior(l, t[[i, l]]));
        ScoreMatrix::from_trusted(scores)
    }

    pub fn predict_scores(&self, features: &Array2<f64>) -> Result<ScoreMatrix> {
        let t = self.neighbour_tallies(features)?;
        Ok(self.scores_from_tallies(&t))
    }

    /// Scores of the training instances themselves, each computed from its
    /// neighbours with itself excluded.
    pub fn training_scores(&self) -> ScoreMatrix {
        self.scores_from_tallies(&self.train_tallies)
    }
}
