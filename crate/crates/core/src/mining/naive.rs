//! Exhaustive subset enumeration, kept as a reference for FP-growth.

use crate::dataset::LabelSet;
use crate::error::{Error, Result};

use super::FrequentLabelSet;

pub const NAIVE_MAX_LABELS: usize = 20;

/// Counts every subset of the label universe up to `max_size` members by
/// scanning all transactions. The universe is `0..=max label seen`, which
/// must stay below [`NAIVE_MAX_LABELS`].
pub fn enumerate_frequent_labelsets_naive(
    transactions: &[Vec<usize>],
    min_sup: f64,
    max_size: usize,
) -> Result<Vec<FrequentLabelSet>> {
    if !(min_sup > 0.0 && min_sup <= 1.0) {
        return Err(Error::invalid(format!(
            "minimum support {min_sup} must be in (0, 1]"
        )));
    }
    let n = transactions.len();
    let universe = transactions
        .iter()
        .flat_map(|t| t.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    if universe > NAIVE_MAX_LABELS {
        return Err(Error::invalid(format!(
            "{universe} labels exceed the enumeration limit of {NAIVE_MAX_LABELS}"
        )));
    }
    let masks: Vec<u32> = transactions
        .iter()
        .map(|t| t.iter().fold(0u32, |m, &l| m | (1 << l)))
        .collect();

    let mut out = Vec::new();
    for subset in 1u32..(1u32 << universe) {
        if subset.count_ones() as usize > max_size {
            continue;
        }
        let count = masks.iter().filter(|&&m| m & subset == subset).count();
        let support = count as f64 / n as f64;
        if count > 0 && support >= min_sup {
            let members: Vec<usize> = (0..universe).filter(|&l| subset & (1 << l) != 0).collect();
            out.push(FrequentLabelSet {
                labels: LabelSet::new(members)?,
                count,
                support,
            });
        }
    }
    out.sort_by(|a, b| {
        b.support
            .total_cmp(&a.support)
            .then_with(|| a.labels.cmp(&b.labels))
    });
    Ok(out)
}
