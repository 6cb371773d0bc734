//! Run configuration and its flat `key = value` file form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::classifier::{DEFAULT_K, DEFAULT_SMOOTHING};
use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::io::{load_csv, load_mulan_arff};
use crate::mining::MiningParams;

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Arff { data: PathBuf, labels: PathBuf },
    Csv { path: PathBuf, label_count: usize },
}

impl DatasetSource {
    pub fn load(&self) -> Result<MultiLabelDataset> {
        match self {
            DatasetSource::Arff { data, labels } => load_mulan_arff(data, labels),
            DatasetSource::Csv { path, label_count } => load_csv(path, *label_count),
        }
    }

    /// File stem of the data file, used to label reports.
    pub fn name(&self) -> String {
        let p = match self {
            DatasetSource::Arff { data, .. } => data,
            DatasetSource::Csv { path, .. } => path,
        };
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierChoice {
    MlKnn { k: usize, smoothing: f64 },
    /// Precomputed scores for every instance of the dataset, in dataset order.
    External { scores: PathBuf, has_header: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset: DatasetSource,
    pub mining: MiningParams,
    pub classifier: ClassifierChoice,
    pub thresholds: Option<(f64, f64)>,
    pub folds: usize,
    pub runs: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub trace: bool,
}

/// Raw key/value settings. Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap(BTreeMap<String, String>);

pub const CONFIG_KEYS: &[&str] = &[
    "data",
    "labels",
    "csv",
    "label_count",
    "min_sup_cp",
    "min_conf_cp",
    "min_sup_ca",
    "min_conf_ca",
    "max_labelset_size",
    "use_frequency_filter",
    "classifier",
    "k",
    "smoothing",
    "external_scores",
    "external_header",
    "thr_lower",
    "thr_upper",
    "folds",
    "runs",
    "seed",
    "output",
    "trace",
];

impl ConfigMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut map = ConfigMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected 'key = value'"))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::parse(origin, i + 1, format!("unknown key '{k}'")));
            }
            map.set(k, v.trim());
        }
        Ok(map)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v.to_string());
        }
    }

    pub fn merge(&mut self, other: &ConfigMap) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn typed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("bad value '{v}' for '{key}'"))),
        }
    }

    fn typed_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.typed(key)?.unwrap_or(default))
    }

    pub fn dataset(&self) -> Result<DatasetSource> {
        match (self.get("data"), self.get("labels"), self.get("csv")) {
            (Some(data), Some(labels), None) => Ok(DatasetSource::Arff {
                data: data.into(),
                labels: labels.into(),
            }),
            (None, None, Some(csv)) => Ok(DatasetSource::Csv {
                path: csv.into(),
                label_count: self
                    .typed("label_count")?
                    .ok_or_else(|| Error::invalid("'csv' requires 'label_count'"))?,
            }),
            _ => Err(Error::invalid(
                "specify either 'data' with 'labels' (ARFF) or 'csv' with 'label_count'",
            )),
        }
    }

    pub fn mining(&self) -> Result<MiningParams> {
        let d = MiningParams::default();
        let params = MiningParams {
            min_sup_cp: self.typed_or("min_sup_cp", d.min_sup_cp)?,
            min_conf_cp: self.typed_or("min_conf_cp", d.min_conf_cp)?,
            min_sup_ca: self.typed_or("min_sup_ca", d.min_sup_ca)?,
            min_conf_ca: self.typed_or("min_conf_ca", d.min_conf_ca)?,
            max_labelset_size: self.typed_or("max_labelset_size", d.max_labelset_size)?,
            use_frequency_filter: self.typed_or("use_frequency_filter", d.use_frequency_filter)?,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn thresholds(&self) -> Result<Option<(f64, f64)>> {
        match (self.typed::<f64>("thr_lower")?, self.typed::<f64>("thr_upper")?) {
            (Some(l), Some(u)) => {
                crate::correction::CertaintyThresholds::fixed(l, u)?;
                Ok(Some((l, u)))
            }
            (None, None) => Ok(None),
            _ => Err(Error::invalid(
                "'thr_lower' and 'thr_upper' must be given together",
            )),
        }
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let classifier = match self.get("classifier").unwrap_or("mlknn") {
            "mlknn" => ClassifierChoice::MlKnn {
                k: self.typed_or("k", DEFAULT_K)?,
                smoothing: self.typed_or("smoothing", DEFAULT_SMOOTHING)?,
            },
            "external" => ClassifierChoice::External {
                scores: self
                    .get("external_scores")
                    .ok_or_else(|| Error::invalid("classifier 'external' needs 'external_scores'"))?
                    .into(),
                has_header: self.typed_or("external_header", true)?,
            },
            other => return Err(Error::invalid(format!("unknown classifier '{other}'"))),
        };
        let folds: usize = self.typed_or("folds", 5)?;
        let runs: usize = self.typed_or("runs", 1)?;
        if runs == 0 {
            return Err(Error::invalid("'runs' must be positive"));
        }
        Ok(RunConfig {
            dataset: self.dataset()?,
            mining: self.mining()?,
            classifier,
            thresholds: self.thresholds()?,
            folds,
            runs,
            seed: self.typed_or("seed", 0)?,
            output: self.get("output").unwrap_or("flma-out").into(),
            trace: self.typed_or("trace", false)?,
        })
    }
}

impl RunConfig {
    /// Flat `key = value` form; [`ConfigMap::parse`] reads it back.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        match &self.dataset {
            DatasetSource::Arff { data, labels } => {
                kv("data", &data.display());
                kv("labels", &labels.display());
            }
            DatasetSource::Csv { path, label_count } => {
                kv("csv", &path.display());
                kv("label_count", label_count);
            }
        }
        let m = &self.mining;
        kv("min_sup_cp", &m.min_sup_cp);
        kv("min_conf_cp", &m.min_conf_cp);
        kv("min_sup_ca", &m.min_sup_ca);
        kv("min_conf_ca", &m.min_conf_ca);
        kv("max_labelset_size", &m.max_labelset_size);
        kv("use_frequency_filter", &m.use_frequency_filter);
        match &self.classifier {
            ClassifierChoice::MlKnn { k, smoothing } => {
                kv("classifier", &"mlknn");
                kv("k", k);
                kv("smoothing", smoothing);
            }
            ClassifierChoice::External { scores, has_header } => {
                kv("classifier", &"external");
                kv("external_scores", &scores.display());
                kv("external_header", has_header);
            }
        }
        if let Some((l, u)) = self.thresholds {
            kv("thr_lower", &l);
            kv("thr_upper", &u);
        }
        kv("folds", &self.folds);
        kv("runs", &self.runs);
        kv("seed", &self.seed);
        kv("output", &self.output.display());
        kv("trace", &self.trace);
        out
    }
}
