//! FP-tree construction and FP-growth extraction.

use crate::dataset::LabelSet;
use crate::error::{Error, Result};

use super::FrequentLabelSet;

const ROOT: usize = 0;

#[derive(Debug, Clone)]
struct Node {
    label: Option<usize>,
    count: u64,
    parent: usize,
    children: Vec<usize>,
}

/// One label's entry in the header table: its total count and the chain of
/// tree nodes carrying it, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderEntry {
    pub label: usize,
    pub count: u64,
    pub nodes: Vec<usize>,
}

/// Read-only view of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeView<'a> {
    pub id: usize,
    pub label: Option<usize>,
    pub count: u64,
    pub children: &'a [usize],
}

#[derive(Debug, Clone)]
pub struct FpTree {
    nodes: Vec<Node>,
    /// Frequent labels by descending count, ties by ascending label.
    header: Vec<HeaderEntry>,
    /// Position of each label in `header`, indexed by label.
    rank: Vec<Option<usize>>,
    transaction_count: usize,
    min_count: u64,
}

/// Smallest count `m` such that `m / n >= min_sup`.
pub(crate) fn min_count_for(min_sup: f64, n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    let nf = n as f64;
    let mut m = (min_sup * nf).ceil().max(1.0) as u64;
    while m > 1 && (m - 1) as f64 / nf >= min_sup {
        m -= 1;
    }
    while (m as f64) / nf < min_sup {
        m += 1;
    }
    m
}

pub(crate) fn check_min_sup(min_sup: f64) -> Result<()> {
    if !(min_sup > 0.0 && min_sup <= 1.0) {
        return Err(Error::invalid(format!(
            "minimum support {min_sup} must be in (0, 1]"
        )));
    }
    Ok(())
}

/// Builds an FP-tree over `transactions`. Every transaction, empty or not,
/// counts toward the support denominator.
pub fn build_fp_tree(transactions: &[Vec<usize>], min_sup: f64) -> Result<FpTree> {
    check_min_sup(min_sup)?;
    let n = transactions.len();
    let min_count = min_count_for(min_sup, n);
    let weighted = transactions.iter().map(|t| (t.as_slice(), 1u64));
    Ok(FpTree::from_weighted(weighted, min_count, n))
}

impl FpTree {
    fn from_weighted<'a, I>(transactions: I, min_count: u64, transaction_count: usize) -> FpTree
    where
        I: Iterator<Item = (&'a [usize], u64)> + Clone,
    {
        let mut counts: Vec<u64> = Vec::new();
        for (t, w) in transactions.clone() {
            for &label in t {
                if label >= counts.len() {
                    counts.resize(label + 1, 0);
                }
                counts[label] += w;
            }
        }
        let mut order: Vec<usize> = (0..counts.len())
            .filter(|&l| counts[l] >= min_count && counts[l] > 0)
            .collect();
        order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));

        let mut rank = vec![None; counts.len()];
        for (r, &label) in order.iter().enumerate() {
            rank[label] = Some(r);
        }
        let header = order
            .iter()
            .map(|&label| HeaderEntry {
                label,
                count: 0,
                nodes: Vec::new(),
            })
            .collect();

        let mut tree = FpTree {
            nodes: vec![Node {
                label: None,
                count: 0,
                parent: ROOT,
                children: Vec::new(),
            }],
            header,
            rank,
            transaction_count,
            min_count,
        };

        let mut path: Vec<usize> = Vec::new();
        for (t, w) in transactions {
            path.clear();
            path.extend(t.iter().filter_map(|&l| tree.rank.get(l).copied().flatten()));
            path.sort_unstable();
            path.dedup();
            tree.insert_ranked(&path, w);
        }
        tree
    }

    fn insert_ranked(&mut self, ranked: &[usize], weight: u64) {
        let mut current = ROOT;
        for &r in ranked {
            let label = self.header[r].label;
            let existing = self.nodes[current]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].label == Some(label));
            let next = match existing {
                Some(child) => child,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(Node {
                        label: Some(label),
                        count: 0,
                        parent: current,
                        children: Vec::new(),
                    });
                    self.nodes[current].children.push(id);
                    self.header[r].nodes.push(id);
                    id
                }
            };
            self.nodes[next].count += weight;
            self.header[r].count += weight;
            current = next;
        }
    }

    pub fn transaction_count(&self) -> usize {
        self.transaction_count
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn header(&self) -> &[HeaderEntry] {
        &self.header
    }

    /// Frequent labels in insertion order.
    pub fn item_order(&self) -> Vec<usize> {
        self.header.iter().map(|h| h.label).collect()
    }

    pub fn root(&self) -> NodeView<'_> {
        self.node(ROOT)
    }

    pub fn node(&self, id: usize) -> NodeView<'_> {
        let n = &self.nodes[id];
        NodeView {
            id,
            label: n.label,
            count: n.count,
            children: &n.children,
        }
    }

    /// Child of `id` carrying `label`, if any.
    pub fn child(&self, id: usize, label: usize) -> Option<NodeView<'_>> {
        self.nodes[id]
            .children
            .iter()
            .find(|&&c| self.nodes[c].label == Some(label))
            .map(|&c| self.node(c))
    }

    /// Checks the structural invariants: child counters never exceed the
    /// parent's, labels follow item order along every path, and header
    /// chain sums match the per-label totals.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for (id, node) in self.nodes.iter().enumerate().skip(1) {
            let parent = &self.nodes[node.parent];
            if parent.label.is_some() && node.count > parent.count {
                return Err(format!("node {id} count exceeds its parent"));
            }
            if let (Some(pl), Some(l)) = (parent.label, node.label) {
                if self.rank[pl] >= self.rank[l] {
                    return Err(format!("node {id} breaks item order"));
                }
            }
        }
        for entry in &self.header {
            let sum: u64 = entry.nodes.iter().map(|&n| self.nodes[n].count).sum();
            if sum != entry.count {
                return Err(format!("header chain of label {} is incoherent", entry.label));
            }
        }
        Ok(())
    }

    /// Labels on the path from the root down to (excluding) `id`, root first.
    fn prefix_path(&self, id: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = self.nodes[id].parent;
        while cur != ROOT {
            path.push(self.nodes[cur].label.expect("non-root node has a label"));
            cur = self.nodes[cur].parent;
        }
        path.reverse();
        path
    }

    fn grow(&self, suffix: &[usize], min_count: u64, max_size: usize, out: &mut Vec<(Vec<usize>, u64)>) {
        for entry in self.header.iter().rev() {
            if entry.count < min_count {
                continue;
            }
            let mut set = Vec::with_capacity(suffix.len() + 1);
            set.extend_from_slice(suffix);
            set.push(entry.label);
            let mut sorted = set.clone();
            sorted.sort_unstable();
            out.push((sorted, entry.count));

            if set.len() >= max_size {
                continue;
            }
            let base: Vec<(Vec<usize>, u64)> = entry
                .nodes
                .iter()
                .map(|&n| (self.prefix_path(n), self.nodes[n].count))
                .filter(|(p, _)| !p.is_empty())
                .collect();
            if base.is_empty() {
                continue;
            }
            let conditional = FpTree::from_weighted(
                base.iter().map(|(p, w)| (p.as_slice(), *w)),
                min_count,
                self.transaction_count,
            );
            if !conditional.is_empty() {
                conditional.grow(&set, min_count, max_size, out);
            }
        }
    }
}

/// Every label set of size `1..=max_size` with support at least `min_sup`,
/// sorted by descending support, ties by lexicographic label order.
pub fn extract_frequent_labelsets(
    tree: &FpTree,
    min_sup: f64,
    max_size: usize,
) -> Result<Vec<FrequentLabelSet>> {
    check_min_sup(min_sup)?;
    let n = tree.transaction_count;
    if n == 0 || max_size == 0 {
        return Ok(Vec::new());
    }
    let min_count = min_count_for(min_sup, n).max(tree.min_count);
    let mut raw = Vec::new();
    tree.grow(&[], min_count, max_size, &mut raw);
    let mut out: Vec<FrequentLabelSet> = raw
        .into_iter()
        .map(|(labels, count)| FrequentLabelSet {
            labels: LabelSet::from_sorted(labels),
            count: count as usize,
            support: count as f64 / n as f64,
        })
        .collect();
    super::sort_frequent(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;

    fn example() -> Vec<Vec<usize>> {
        vec![vec![A, B], vec![A, B], vec![A], vec![B]]
    }

    #[test]
    fn four_transaction_tree_shape() {
        let tree = build_fp_tree(&example(), 0.5).unwrap();
        tree.verify().unwrap();
        assert_eq!(tree.item_order(), vec![A, B]);
        let root = tree.root();
        assert_eq!(root.children.len(), 2);
        let a = tree.child(root.id, A).unwrap();
        assert_eq!(a.count, 3);
        let ab = tree.child(a.id, B).unwrap();
        assert_eq!(ab.count, 2);
        assert!(ab.children.is_empty());
        let b = tree.child(root.id, B).unwrap();
        assert_eq!(b.count, 1);
        assert!(b.children.is_empty());
    }

    #[test]
    fn empty_transactions_give_bare_root() {
        let tree = build_fp_tree(&[vec![], vec![], vec![]], 0.2).unwrap();
        assert!(tree.is_empty());
        assert_eq!(tree.transaction_count(), 3);
        assert!(extract_frequent_labelsets(&tree, 0.2, 3).unwrap().is_empty());
    }

    #[test]
    fn universal_label_single_chain() {
        let tx = vec![vec![2], vec![2, 5], vec![2], vec![2]];
        let tree = build_fp_tree(&tx, 1.0).unwrap();
        assert_eq!(tree.node_count(), 2);
        let c = tree.child(ROOT, 2).unwrap();
        assert_eq!(c.count, 4);
    }

    #[test]
    fn rejects_bad_min_sup() {
        assert!(build_fp_tree(&example(), 0.0).is_err());
        assert!(build_fp_tree(&example(), 1.5).is_err());
        assert!(build_fp_tree(&example(), f64::NAN).is_err());
    }

    #[test]
    fn extracts_example_sets() {
        let tree = build_fp_tree(&example(), 0.5).unwrap();
        let sets = extract_frequent_labelsets(&tree, 0.5, 2).unwrap();
        let got: Vec<(Vec<usize>, f64)> = sets
            .iter()
            .map(|f| (f.labels.members().to_vec(), f.support))
            .collect();
        assert_eq!(
            got,
            vec![(vec![A], 0.75), (vec![B], 0.75), (vec![A, B], 0.5)]
        );
        assert!(extract_frequent_labelsets(&tree, 0.8, 2).unwrap().is_empty());
        let singles = extract_frequent_labelsets(&tree, 0.5, 1).unwrap();
        assert_eq!(singles.len(), 2);
    }

    #[test]
    fn extraction_at_higher_threshold_than_build() {
        let tx = vec![vec![0, 1, 2], vec![0, 1], vec![0], vec![2], vec![0, 2]];
        let tree = build_fp_tree(&tx, 0.2).unwrap();
        let sets = extract_frequent_labelsets(&tree, 0.6, 3).unwrap();
        let got: Vec<Vec<usize>> = sets.iter().map(|f| f.labels.members().to_vec()).collect();
        assert_eq!(got, vec![vec![0], vec![2]]);
    }

    #[test]
    fn min_count_boundaries() {
        assert_eq!(min_count_for(0.5, 4), 2);
        assert_eq!(min_count_for(0.3, 10), 3);
        assert_eq!(min_count_for(0.31, 10), 4);
        assert_eq!(min_count_for(1e-9, 10), 1);
        assert_eq!(min_count_for(1.0, 7), 7);
    }
}
