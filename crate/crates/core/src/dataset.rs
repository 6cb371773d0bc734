//! Multi-label dataset representation and label statistics.

use std::collections::HashSet;
use std::fmt;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Strictly increasing, non-empty list of label indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(Vec<usize>);

impl LabelSet {
    /// Builds a label set from arbitrary indices, sorting and deduplicating them.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("label set must not be empty"));
        }
        members.sort_unstable();
        members.dedup();
        Ok(LabelSet(members))
    }

    pub fn singleton(label: usize) -> Self {
        LabelSet(vec![label])
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(!members.is_empty());
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        LabelSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// True when every member of `self` is present in the sorted slice `items`.
    pub fn is_subset_of(&self, items: &[usize]) -> bool {
        let mut it = items.iter();
        self.0.iter().all(|m| it.any(|x| x == m))
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        !self.0.iter().any(|m| other.contains(*m))
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        LabelSet(v)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Feature matrix plus binary label matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    features: Array2<f64>,
    labels: Array2<u8>,
    feature_names: Vec<String>,
    label_names: Vec<String>,
}

impl MultiLabelDataset {
    /// Missing feature values are stored as NaN; see [`MultiLabelDataset::impute_missing`].
    pub fn new(
        features: Array2<f64>,
        labels: Array2<u8>,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let n = labels.nrows();
        if n == 0 {
            return Err(Error::invalid("dataset has no instances"));
        }
        if labels.ncols() == 0 {
            return Err(Error::invalid("dataset has no labels"));
        }
        if features.nrows() != n {
            return Err(Error::Dimension(format!(
                "features have {} rows but labels have {n}",
                features.nrows()
            )));
        }
        if feature_names.len() != features.ncols() {
            return Err(Error::Dimension(format!(
                "{} feature names for {} feature columns",
                feature_names.len(),
                features.ncols()
            )));
        }
        if label_names.len() != labels.ncols() {
            return Err(Error::Dimension(format!(
                "{} label names for {} label columns",
                label_names.len(),
                labels.ncols()
            )));
        }
        let mut seen = HashSet::new();
        for name in &label_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("duplicate label name '{name}'")));
            }
        }
        if let Some(v) = labels.iter().find(|&&v| v > 1) {
            return Err(Error::invalid(format!("non-binary label value {v}")));
        }
        Ok(MultiLabelDataset {
            features,
            labels,
            feature_names,
            label_names,
        })
    }

    pub fn instance_count(&self) -> usize {
        self.labels.nrows()
    }

    pub fn label_count(&self) -> usize {
        self.labels.ncols()
    }

    pub fn feature_count(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &Array2<u8> {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Fraction of instances for which `label` is relevant.
    pub fn label_support(&self, label: usize) -> Result<f64> {
        if label >= self.label_count() {
            return Err(Error::invalid(format!(
                "label index {label} out of range for {} labels",
                self.label_count()
            )));
        }
        let count = self
            .labels
            .column(label)
            .iter()
            .filter(|&&v| v == 1)
            .count();
        Ok(count as f64 / self.instance_count() as f64)
    }

    pub fn label_supports(&self) -> Vec<f64> {
        (0..self.label_count())
            .map(|l| self.label_support(l).expect("index in range"))
            .collect()
    }

    /// `1 - labels`, the irrelevant label matrix.
    pub fn complement_labels(&self) -> Array2<u8> {
        complement(&self.labels)
    }

    /// Labels whose support is at least the mean support, ascending.
    pub fn filter_frequent_labels(&self) -> Vec<usize> {
        // support >= mean(support)  <=>  count * C >= sum(counts), exact in integers
        let counts: Vec<usize> = self
            .labels
            .columns()
            .into_iter()
            .map(|col| col.iter().filter(|&&v| v == 1).count())
            .collect();
        let total: usize = counts.iter().sum();
        let c = counts.len();
        counts
            .iter()
            .enumerate()
            .filter(|(_, &cnt)| cnt * c >= total)
            .map(|(i, _)| i)
            .collect()
    }

    /// Relevant label indices of every instance, in instance order.
    pub fn relevant_transactions(&self) -> Vec<Vec<usize>> {
        transactions_from_matrix(&self.labels)
    }

    /// Rows `indices` (in the given order) as a new dataset.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.instance_count()) {
            return Err(Error::invalid(format!("instance index {bad} out of range")));
        }
        MultiLabelDataset::new(
            self.features.select(Axis(0), indices),
            self.labels.select(Axis(0), indices),
            self.feature_names.clone(),
            self.label_names.clone(),
        )
    }

    pub fn has_missing_features(&self) -> bool {
        self.features.iter().any(|v| v.is_nan())
    }

    /// Column means over `reference_rows`, ignoring missing values. A column
    /// with no observed value gets mean 0.
    pub fn feature_means(&self, reference_rows: &[usize]) -> Vec<f64> {
        (0..self.feature_count())
            .map(|j| {
                let (sum, cnt) = reference_rows
                    .iter()
                    .map(|&i| self.features[[i, j]])
                    .filter(|v| !v.is_nan())
                    .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
                if cnt == 0 {
                    0.0
                } else {
                    sum / cnt as f64
                }
            })
            .collect()
    }

    /// Replaces missing feature values with the given per-column means.
    pub fn impute_missing(&self, means: &[f64]) -> Result<Self> {
        if means.len() != self.feature_count() {
            return Err(Error::Dimension(format!(
                "{} means for {} feature columns",
                means.len(),
                self.feature_count()
            )));
        }
        let mut features = self.features.clone();
        for mut row in features.rows_mut() {
            for (v, m) in row.iter_mut().zip(means) {
                if v.is_nan() {
                    *v = *m;
                }
            }
        }
        Ok(MultiLabelDataset {
            features,
            labels: self.labels.clone(),
            feature_names: self.feature_names.clone(),
            label_names: self.label_names.clone(),
        })
    }
}

pub fn complement(labels: &Array2<u8>) -> Array2<u8> {
    labels.mapv(|v| 1 - v)
}

pub fn transactions_from_matrix(labels: &Array2<u8>) -> Vec<Vec<usize>> {
    labels
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// One cross-validation fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    pub fold_id: usize,
    pub seed: u64,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Seeded shuffle into `k` folds whose test sizes differ by at most one.
/// The first `n % k` folds receive the extra instance.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<Vec<FoldSplit>> {
    if k < 2 || k > n {
        return Err(Error::invalid(format!(
            "fold count {k} out of range [2, {n}]"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for fold_id in 0..k {
        let size = base + usize::from(fold_id < extra);
        let mut test: Vec<usize> = order[start..start + size].to_vec();
        test.sort_unstable();
        let mut train: Vec<usize> = order[..start]
            .iter()
            .chain(order[start + size..].iter())
            .copied()
            .collect();
        train.sort_unstable();
        folds.push(FoldSplit {
            fold_id,
            seed,
            train_indices: train,
            test_indices: test,
        });
        start += size;
    }
    Ok(folds)
}
