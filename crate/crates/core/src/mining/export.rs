//! Tab separated rule files.
//!
//! One rule per line: `polarity<TAB>antecedent<TAB>consequent<TAB>support<TAB>confidence`,
//! where label sets are comma separated label names. Lines that are empty or
//! start with `#` are ignored.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::dataset::LabelSet;
use crate::error::{Error, Result};

use super::{AssociationRule, Polarity};

pub fn format_rules(rules: &[AssociationRule], label_names: &[String]) -> Result<String> {
    if let Some(bad) = label_names
        .iter()
        .find(|n| n.is_empty() || n.contains(['\t', ',', '\n', '\r']))
    {
        return Err(Error::Format(format!(
            "label name '{bad}' cannot be written to a rule file"
        )));
    }
    let names = |set: &LabelSet| -> Result<String> {
        let parts = set
            .members()
            .iter()
            .map(|&i| {
                label_names.get(i).map(String::as_str).ok_or_else(|| {
                    Error::invalid(format!("rule references unknown label index {i}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(parts.join(","))
    };
    let mut out = String::new();
    for r in rules {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.polarity,
            names(&r.antecedent)?,
            names(&r.consequent)?,
            r.support,
            r.confidence
        ));
    }
    Ok(out)
}

pub fn parse_rules(text: &str, label_names: &[String], path: &Path) -> Result<Vec<AssociationRule>> {
    let index: HashMap<&str, usize> = label_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected 5 tab separated fields, found {}", fields.len()),
            ));
        }
        let polarity: Polarity = fields[0]
            .parse()
            .map_err(|m: String| Error::parse(path, line_no, m))?;
        let labels = |field: &str| -> Result<LabelSet> {
            let ids = field
                .split(',')
                .map(|name| {
                    index.get(name).copied().ok_or_else(|| {
                        Error::LabelMismatch(format!(
                            "{}:{line_no}: rule label '{name}' is not among the known labels",
                            path.display()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            LabelSet::new(ids).map_err(|e| Error::parse(path, line_no, e.to_string()))
        };
        let antecedent = labels(fields[1])?;
        let consequent = labels(fields[2])?;
        if !antecedent.is_disjoint(&consequent) {
            return Err(Error::parse(
                path,
                line_no,
                "antecedent and consequent overlap",
            ));
        }
        let number = |field: &str, what: &str| -> Result<f64> {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::parse(path, line_no, format!("bad {what} '{field}'")))?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("{what} {v} outside (0, 1]"),
                ));
            }
            Ok(v)
        };
        rules.push(AssociationRule {
            antecedent,
            consequent,
            polarity,
            support: number(fields[3], "support")?,
            confidence: number(fields[4], "confidence")?,
        });
    }
    Ok(rules)
}

pub fn write_rules(
    path: impl AsRef<Path>,
    rules: &[AssociationRule],
    label_names: &[String],
) -> Result<()> {
    let path = path.as_ref();
    let text = format_rules(rules, label_names)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_rules(path: impl AsRef<Path>, label_names: &[String]) -> Result<Vec<AssociationRule>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rules(&text, label_names, path)
}
