//! Multi-label classification with label-association correction.
//!
//! Co-presence (CP) and co-absence (CA) association rules are mined from the
//! training label matrix with FP-growth. A base classifier (ML-KNN or any
//! external scorer) produces per-label scores; scores inside an uncertainty
//! band are then pushed towards 1 or 0 by rules whose premises are certain.

pub mod classifier;
pub mod config;
pub mod correction;
pub mod dataset;
pub mod error;
pub mod io;
pub mod metrics;
pub mod mining;
pub mod pipeline;

pub use classifier::{fit_mlknn, load_external_scores, MlKnnModel, ScoreMatrix};
pub use config::{ClassifierChoice, ConfigMap, DatasetSource, RunConfig};
pub use correction::{
    apply_rules, correct, fit_thresholds, harden, partition, CertaintyThresholds, CorrectionTrace,
};
pub use dataset::{kfold_split, FoldSplit, LabelSet, MultiLabelDataset};
pub use error::{Error, Result};
pub use metrics::{aggregate, evaluate, EvaluationReport};
pub use mining::{
    build_fp_tree, clean_rules, extract_frequent_labelsets, generate_rules, mine_cp_ca,
    AssociationRule, MiningParams, Polarity,
};
