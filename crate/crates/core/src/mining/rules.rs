use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::LabelSet;

use super::{FrequentLabelSet, TransactionIndex};

/// Whether a rule was mined from relevant (co-presence) or irrelevant
/// (co-absence) label sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "CP")]
    CoPresence,
    #[serde(rename = "CA")]
    CoAbsence,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::CoPresence => "CP",
            Polarity::CoAbsence => "CA",
        })
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "CP" => Ok(Polarity::CoPresence),
            "CA" => Ok(Polarity::CoAbsence),
            other => Err(format!("unknown polarity '{other}'")),
        }
    }
}

/// `antecedent -> consequent` with its support and confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: LabelSet,
    pub consequent: LabelSet,
    pub polarity: Polarity,
    pub support: f64,
    pub confidence: f64,
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} -> {} (sup {:.4}, conf {:.4})",
            self.polarity, self.antecedent, self.consequent, self.support, self.confidence
        )
    }
}

/// Emits every antecedent/consequent partition of each frequent set of two
/// or more labels whose confidence reaches `min_conf`. Support and
/// confidence are recounted from `transactions`.
pub fn generate_rules(
    frequent: &[FrequentLabelSet],
    transactions: &[Vec<usize>],
    min_conf: f64,
    polarity: Polarity,
) -> Vec<AssociationRule> {
    let index = TransactionIndex::new(transactions);
    let n = index.transaction_count();
    if n == 0 {
        return Vec::new();
    }
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut count_of = |labels: &[usize]| -> usize {
        if let Some(&c) = counts.get(labels) {
            return c;
        }
        let c = index.count(labels);
        counts.insert(labels.to_vec(), c);
        c
    };

    let mut rules = Vec::new();
    for set in frequent.iter().filter(|s| s.labels.len() >= 2) {
        let members = set.labels.members();
        let k = members.len();
        let joint = count_of(members);
        if joint == 0 {
            continue;
        }
        // Every proper, non-empty subset as antecedent.
        for mask in 1..(1u64 << k) - 1 {
            let (ante, cons): (Vec<usize>, Vec<usize>) = {
                let mut a = Vec::new();
                let mut c = Vec::new();
                for (bit, &m) in members.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        a.push(m);
                    } else {
                        c.push(m);
                    }
                }
                (a, c)
            };
            let ante_count = count_of(&ante);
            let confidence = joint as f64 / ante_count as f64;
            if confidence >= min_conf {
                rules.push(AssociationRule {
                    antecedent: LabelSet::from_sorted(ante),
                    consequent: LabelSet::from_sorted(cons),
                    polarity,
                    support: joint as f64 / n as f64,
                    confidence,
                });
            }
        }
    }
    rules
}

/// Total order used for rule application: confidence descending, support
/// descending, then antecedent, consequent and polarity ascending.
pub(crate) fn rule_order(a: &AssociationRule, b: &AssociationRule) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| b.support.total_cmp(&a.support))
        .then_with(|| a.antecedent.members().cmp(b.antecedent.members()))
        .then_with(|| a.consequent.members().cmp(b.consequent.members()))
        .then_with(|| a.polarity.cmp(&b.polarity))
}

/// Merges CP and CA rules. Where both polarities share an identical
/// (antecedent, consequent) pair, the one with higher confidence, then
/// higher support, survives; remaining ties keep CP.
pub fn clean_rules(cp: &[AssociationRule], ca: &[AssociationRule]) -> Vec<AssociationRule> {
    let mut by_key: HashMap<(&LabelSet, &LabelSet), &AssociationRule> = HashMap::new();
    let mut order: Vec<(&LabelSet, &LabelSet)> = Vec::new();
    for rule in cp.iter().chain(ca.iter()) {
        let key = (&rule.antecedent, &rule.consequent);
        match by_key.get(&key) {
            None => {
                by_key.insert(key, rule);
                order.push(key);
            }
            Some(existing) => {
                if beats(rule, existing) {
                    by_key.insert(key, rule);
                }
            }
        }
    }
    let mut out: Vec<AssociationRule> = order.iter().map(|k| by_key[k].clone()).collect();
    out.sort_by(rule_order);
    out
}

fn beats(challenger: &AssociationRule, incumbent: &AssociationRule) -> bool {
    match challenger.confidence.total_cmp(&incumbent.confidence) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match challenger.support.total_cmp(&incumbent.support) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                challenger.polarity == Polarity::CoPresence
                    && incumbent.polarity == Polarity::CoAbsence
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mining::{build_fp_tree, extract_frequent_labelsets};

    fn rule(a: &[usize], c: &[usize], p: Polarity, sup: f64, conf: f64) -> AssociationRule {
        AssociationRule {
            antecedent: LabelSet::new(a.to_vec()).unwrap(),
            consequent: LabelSet::new(c.to_vec()).unwrap(),
            polarity: p,
            support: sup,
            confidence: conf,
        }
    }

    fn example() -> Vec<Vec<usize>> {
        vec![vec![0, 1], vec![0, 1], vec![0], vec![1]]
    }

    fn frequent(tx: &[Vec<usize>], min_sup: f64) -> Vec<FrequentLabelSet> {
        let tree = build_fp_tree(tx, min_sup).unwrap();
        extract_frequent_labelsets(&tree, min_sup, 3).unwrap()
    }

    #[test]
    fn confidence_threshold_on_example() {
        let tx = example();
        let f = frequent(&tx, 0.5);
        let kept = generate_rules(&f, &tx, 0.6, Polarity::CoPresence);
        assert_eq!(kept.len(), 2);
        assert!((kept[0].confidence - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(kept[0].support, 0.5);
        assert!(generate_rules(&f, &tx, 0.7, Polarity::CoPresence).is_empty());
    }

    #[test]
    fn singletons_yield_nothing() {
        let tx = vec![vec![0], vec![1], vec![2]];
        let f = frequent(&tx, 0.3);
        assert!(f.iter().all(|s| s.labels.len() == 1));
        assert!(generate_rules(&f, &tx, 0.1, Polarity::CoPresence).is_empty());
    }

    #[test]
    fn implied_label_has_full_confidence() {
        // label 0 never appears without label 1
        let tx = vec![vec![0, 1], vec![0, 1], vec![1], vec![]];
        let f = frequent(&tx, 0.25);
        let rules = generate_rules(&f, &tx, 0.1, Polarity::CoPresence);
        let r = rules
            .iter()
            .find(|r| r.antecedent.members() == [0])
            .unwrap();
        assert_eq!(r.confidence, 1.0);
    }

    #[test]
    fn multi_label_partitions() {
        let tx = vec![vec![0, 1, 2]; 3];
        let f = frequent(&tx, 0.5);
        let rules = generate_rules(&f, &tx, 1.0, Polarity::CoPresence);
        // 3 pairs x 2 + 1 triple x 6
        assert_eq!(rules.len(), 12);
        assert!(rules.iter().all(|r| r.antecedent.is_disjoint(&r.consequent)));
    }

    #[test]
    fn cleaning_prefers_higher_confidence() {
        let cp = vec![rule(&[0], &[1], Polarity::CoPresence, 0.4, 0.8)];
        let ca = vec![rule(&[0], &[1], Polarity::CoAbsence, 0.3, 0.9)];
        let out = clean_rules(&cp, &ca);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].polarity, Polarity::CoAbsence);
    }

    #[test]
    fn cleaning_ties_keep_cp() {
        let cp = vec![rule(&[0], &[1], Polarity::CoPresence, 0.4, 0.9)];
        let ca = vec![rule(&[0], &[1], Polarity::CoAbsence, 0.4, 0.9)];
        assert_eq!(clean_rules(&cp, &ca)[0].polarity, Polarity::CoPresence);
        assert_eq!(clean_rules(&[], &ca)[0].polarity, Polarity::CoAbsence);
        let ca_hi_sup = vec![rule(&[0], &[1], Polarity::CoAbsence, 0.5, 0.9)];
        assert_eq!(clean_rules(&cp, &ca_hi_sup)[0].polarity, Polarity::CoAbsence);
    }

    #[test]
    fn cleaning_sorts_disjoint_sets() {
        let cp = vec![
            rule(&[0], &[1], Polarity::CoPresence, 0.4, 0.6),
            rule(&[2], &[1], Polarity::CoPresence, 0.2, 0.9),
        ];
        let ca = vec![
            rule(&[3], &[4], Polarity::CoAbsence, 0.8, 0.9),
            rule(&[1], &[0], Polarity::CoAbsence, 0.5, 0.6),
        ];
        let out = clean_rules(&cp, &ca);
        let keys: Vec<(usize, f64, f64)> = out
            .iter()
            .map(|r| (r.antecedent.members()[0], r.confidence, r.support))
            .collect();
        assert_eq!(
            keys,
            vec![(3, 0.9, 0.8), (2, 0.9, 0.2), (1, 0.6, 0.5), (0, 0.6, 0.4)]
        );
        assert_eq!(clean_rules(&cp, &ca), out);
    }
}
