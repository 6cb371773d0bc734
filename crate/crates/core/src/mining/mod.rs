//! Frequent label-set mining over relevant and complemented label matrices.

mod export;
mod fptree;
mod naive;
mod rules;

use serde::{Deserialize, Serialize};

use crate::dataset::{complement, transactions_from_matrix, LabelSet, MultiLabelDataset};
use crate::error::{Error, Result};

pub use export::{format_rules, parse_rules, read_rules, write_rules};
pub use fptree::{build_fp_tree, extract_frequent_labelsets, FpTree, HeaderEntry, NodeView};
pub use naive::{enumerate_frequent_labelsets_naive, NAIVE_MAX_LABELS};
pub use rules::{clean_rules, generate_rules, AssociationRule, Polarity};

/// A label set together with its absolute count and support.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentLabelSet {
    pub labels: LabelSet,
    pub count: usize,
    pub support: f64,
}

pub(crate) fn sort_frequent(sets: &mut [FrequentLabelSet]) {
    sets.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.labels.members().cmp(b.labels.members()))
    });
}

/// Thresholds for co-presence (CP) and co-absence (CA) mining.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    pub min_sup_cp: f64,
    pub min_conf_cp: f64,
    pub min_sup_ca: f64,
    pub min_conf_ca: f64,
    pub max_labelset_size: usize,
    pub use_frequency_filter: bool,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            min_sup_cp: 0.1,
            min_conf_cp: 0.5,
            min_sup_ca: 0.8,
            min_conf_ca: 0.9,
            max_labelset_size: 3,
            use_frequency_filter: false,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("min_sup_cp", self.min_sup_cp),
            ("min_conf_cp", self.min_conf_cp),
            ("min_sup_ca", self.min_sup_ca),
            ("min_conf_ca", self.min_conf_ca),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(format!("{name} = {v} must be in (0, 1]")));
            }
        }
        if self.max_labelset_size == 0 {
            return Err(Error::invalid("max_labelset_size must be positive"));
        }
        if self.min_sup_ca < self.min_sup_cp || self.min_conf_ca < self.min_conf_cp {
            log::warn!("co-absence thresholds are below the co-presence thresholds");
        }
        Ok(())
    }
}

/// Vertical (per-label bitset) view of a transaction list for fast
/// label-set counting.
#[derive(Debug, Clone)]
pub struct TransactionIndex {
    columns: Vec<Vec<u64>>,
    transaction_count: usize,
}

impl TransactionIndex {
    pub fn new(transactions: &[Vec<usize>]) -> Self {
        let words = transactions.len().div_ceil(64);
        let width = transactions
            .iter()
            .flat_map(|t| t.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        let mut columns = vec![vec![0u64; words]; width];
        for (i, t) in transactions.iter().enumerate() {
            for &l in t {
                columns[l][i / 64] |= 1 << (i % 64);
            }
        }
        TransactionIndex {
            columns,
            transaction_count: transactions.len(),
        }
    }

    pub fn transaction_count(&self) -> usize {
        self.transaction_count
    }

    /// Number of transactions containing every label of `labels`.
    pub fn count(&self, labels: &[usize]) -> usize {
        let Some((&first, rest)) = labels.split_first() else {
            return self.transaction_count;
        };
        let Some(col) = self.columns.get(first) else {
            return 0;
        };
        let mut acc = col.clone();
        for &l in rest {
            match self.columns.get(l) {
                Some(c) => acc.iter_mut().zip(c).for_each(|(a, b)| *a &= b),
                None => return 0,
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Mined CP and CA rules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MinedRules {
    pub cp: Vec<AssociationRule>,
    pub ca: Vec<AssociationRule>,
}

fn mine_polarity(
    transactions: &[Vec<usize>],
    min_sup: f64,
    min_conf: f64,
    max_size: usize,
    polarity: Polarity,
) -> Result<Vec<AssociationRule>> {
    let tree = build_fp_tree(transactions, min_sup)?;
    let frequent = extract_frequent_labelsets(&tree, min_sup, max_size)?;
    Ok(generate_rules(&frequent, transactions, min_conf, polarity))
}

/// Mines CP rules from the label matrix rows and CA rules from the
/// complemented rows.
pub fn mine_cp_ca(dataset: &MultiLabelDataset, params: &MiningParams) -> Result<MinedRules> {
    params.validate()?;
    let mut relevant = dataset.relevant_transactions();
    if params.use_frequency_filter {
        let keep = dataset.filter_frequent_labels();
        for t in &mut relevant {
            t.retain(|l| keep.binary_search(l).is_ok());
        }
    }
    let irrelevant = transactions_from_matrix(&complement(dataset.labels()));

    let (cp, ca) = rayon::join(
        || {
            mine_polarity(
                &relevant,
                params.min_sup_cp,
                params.min_conf_cp,
                params.max_labelset_size,
                Polarity::CoPresence,
            )
        },
        || {
            mine_polarity(
                &irrelevant,
                params.min_sup_ca,
                params.min_conf_ca,
                params.max_labelset_size,
                Polarity::CoAbsence,
            )
        },
    );
    Ok(MinedRules { cp: cp?, ca: ca? })
}
