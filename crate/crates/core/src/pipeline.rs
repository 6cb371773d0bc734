//! Cross-validated comparison of the baseline classifier against its
//! rule-corrected output, plus the single-step commands used by the CLI.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{fit_mlknn, load_external_scores, ScoreMatrix};
use crate::config::{ClassifierChoice, RunConfig};
use crate::correction::{
    correct, fit_thresholds, harden, CertaintyThresholds, CorrectionSummary, CorrectionTrace,
};
use crate::dataset::{kfold_split, FoldSplit, MultiLabelDataset};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, evaluate, EvaluationReport, METRIC_NAMES};
use crate::mining::{clean_rules, mine_cp_ca, write_rules, AssociationRule, MinedRules, MiningParams};

/// Everything computed for one fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub run: usize,
    pub split: FoldSplit,
    pub mined: MinedRules,
    pub rules: Vec<AssociationRule>,
    pub thresholds: CertaintyThresholds,
    pub summary: CorrectionSummary,
    pub trace: CorrectionTrace,
    pub baseline: EvaluationReport,
    pub flma: EvaluationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub dataset: String,
    pub folds: usize,
    pub runs: usize,
    pub baseline: EvaluationReport,
    pub flma: EvaluationReport,
    pub improved: Vec<&'static str>,
    pub mean_rules: f64,
    pub mean_uncertain_cells: f64,
    pub mean_applications: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub folds: Vec<FoldOutcome>,
    pub summary: RunSummary,
}

enum ScoreSource {
    MlKnn { k: usize, smoothing: f64 },
    External(ScoreMatrix),
}

fn prepare_split(
    dataset: &MultiLabelDataset,
    split: &FoldSplit,
) -> Result<(MultiLabelDataset, MultiLabelDataset)> {
    let mut train = dataset.subset(&split.train_indices)?;
    let mut test = dataset.subset(&split.test_indices)?;
    if dataset.has_missing_features() {
        let means = dataset.feature_means(&split.train_indices);
        train = train.impute_missing(&means)?;
        test = test.impute_missing(&means)?;
    }
    Ok((train, test))
}

fn run_fold(
    dataset: &MultiLabelDataset,
    run: usize,
    split: &FoldSplit,
    mining: &MiningParams,
    source: &ScoreSource,
    fixed: Option<CertaintyThresholds>,
) -> Result<FoldOutcome> {
    let (train, test) = prepare_split(dataset, split)?;
    let mined = mine_cp_ca(&train, mining)?;
    let rules = clean_rules(&mined.cp, &mined.ca);

    let (train_scores, test_scores) = match source {
        ScoreSource::MlKnn { k, smoothing } => {
            let model = fit_mlknn(&train, *k, *smoothing)?;
            (model.training_scores(), model.predict_scores(test.features())?)
        }
        ScoreSource::External(all) => (
            all.select_rows(&split.train_indices),
            all.select_rows(&split.test_indices),
        ),
    };
    let thresholds = fixed.unwrap_or_else(|| fit_thresholds(&train_scores));
    let (corrected, trace, part) = correct(&test_scores, &rules, &thresholds)?;
    let summary = trace.summary(part.uncertain_count());

    let truth = test.labels();
    let baseline = evaluate(&harden(&test_scores), &test_scores, truth)?;
    let flma = evaluate(&harden(&corrected), &corrected, truth)?;
    log::debug!(
        "run {run} fold {}: {} rules, {} uncertain cells, {} applications",
        split.fold_id,
        rules.len(),
        summary.uncertain_cells,
        summary.applications
    );
    Ok(FoldOutcome {
        run,
        split: split.clone(),
        mined,
        rules,
        thresholds,
        summary,
        trace,
        baseline,
        flma,
    })
}

/// One fold that could not be completed.
#[derive(Debug)]
pub struct FoldFailure {
    pub run: usize,
    pub fold_id: usize,
    pub error: Error,
}

fn fold_results(
    dataset: &MultiLabelDataset,
    config: &RunConfig,
) -> Result<Vec<std::result::Result<FoldOutcome, FoldFailure>>> {
    let source = match &config.classifier {
        ClassifierChoice::MlKnn { k, smoothing } => ScoreSource::MlKnn {
            k: *k,
            smoothing: *smoothing,
        },
        ClassifierChoice::External { scores, has_header } => {
            let (m, header) = load_external_scores(scores, dataset.label_count(), *has_header)?;
            if m.rows() != dataset.instance_count() {
                return Err(Error::Dimension(format!(
                    "{}: {} score rows for {} instances",
                    scores.display(),
                    m.rows(),
                    dataset.instance_count()
                )));
            }
            if let Some(h) = header {
                check_label_names(&h, dataset.label_names())?;
            }
            ScoreSource::External(m)
        }
    };
    let fixed = config
        .thresholds
        .map(|(l, u)| CertaintyThresholds::fixed(l, u))
        .transpose()?;

    let mut jobs = Vec::new();
    for run in 0..config.runs {
        let seed = config.seed.wrapping_add(run as u64);
        for split in kfold_split(dataset.instance_count(), config.folds, seed)? {
            jobs.push((run, split));
        }
    }
    Ok(jobs
        .par_iter()
        .map(|(run, split)| {
            run_fold(dataset, *run, split, &config.mining, &source, fixed).map_err(|error| {
                FoldFailure {
                    run: *run,
                    fold_id: split.fold_id,
                    error,
                }
            })
        })
        .collect())
}

fn summarize(folds: &[FoldOutcome], config: &RunConfig) -> Result<RunSummary> {
    let baseline = aggregate(&folds.iter().map(|f| f.baseline).collect::<Vec<_>>())?;
    let flma = aggregate(&folds.iter().map(|f| f.flma).collect::<Vec<_>>())?;
    let n = folds.len() as f64;
    let mean = |get: &dyn Fn(&FoldOutcome) -> usize| {
        folds.iter().map(|f| get(f) as f64).sum::<f64>() / n
    };
    Ok(RunSummary {
        dataset: config.dataset.name(),
        folds: config.folds,
        runs: config.runs,
        improved: flma.improvements_over(&baseline),
        baseline,
        flma,
        mean_rules: mean(&|f| f.rules.len()),
        mean_uncertain_cells: mean(&|f| f.summary.uncertain_cells),
        mean_applications: mean(&|f| f.summary.applications),
    })
}

/// Runs `config.runs` repetitions of k-fold cross-validation on `dataset`.
/// Repetition `r` shuffles with seed `config.seed + r`. Nothing is written;
/// the first failing fold aborts.
pub fn cross_validate(dataset: &MultiLabelDataset, config: &RunConfig) -> Result<RunOutcome> {
    let folds = fold_results(dataset, config)?
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|f| f.error)?;
    let summary = summarize(&folds, config)?;
    Ok(RunOutcome { folds, summary })
}

fn check_label_names(found: &[String], expected: &[String]) -> Result<()> {
    if found != expected {
        return Err(Error::LabelMismatch(format!(
            "score columns [{}] do not match dataset labels [{}]",
            found.join(","),
            expected.join(",")
        )));
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn index_lines(indices: &[usize]) -> String {
    let mut out = String::new();
    for i in indices {
        let _ = writeln!(out, "{i}");
    }
    out
}

/// Directory of one fold's artefacts below the output root.
pub fn fold_dir(output: &Path, run: usize, fold: usize) -> PathBuf {
    output.join(format!("run{run}")).join(format!("fold{fold}"))
}

#[derive(Serialize)]
struct FoldDiagnostics<'a> {
    thresholds: &'a CertaintyThresholds,
    correction: &'a CorrectionSummary,
    cp_rules: usize,
    ca_rules: usize,
    applied_rules: usize,
}

fn write_fold(f: &FoldOutcome, label_names: &[String], output: &Path, trace: bool) -> Result<()> {
    let dir = fold_dir(output, f.run, f.split.fold_id);
    create_dir(&dir)?;
    write_rules(dir.join("rules.tsv"), &f.rules, label_names)?;
    write_text(&dir.join("train_indices.txt"), &index_lines(&f.split.train_indices))?;
    write_text(&dir.join("test_indices.txt"), &index_lines(&f.split.test_indices))?;
    write_json(&dir.join("report_baseline.json"), &f.baseline)?;
    write_json(&dir.join("report_flma.json"), &f.flma)?;
    write_json(
        &dir.join("diagnostics.json"),
        &FoldDiagnostics {
            thresholds: &f.thresholds,
            correction: &f.summary,
            cp_rules: f.mined.cp.len(),
            ca_rules: f.mined.ca.len(),
            applied_rules: f.rules.len(),
        },
    )?;
    if trace {
        f.trace.write_tsv(dir.join("trace.tsv"), label_names)?;
    }
    Ok(())
}

fn write_reports(folds: &[FoldOutcome], output: &Path) -> Result<()> {
    let mut reports = format!("run,fold,method,{}\n", METRIC_NAMES.join(","));
    for f in folds {
        for (method, r) in [("baseline", &f.baseline), ("flma", &f.flma)] {
            let _ = writeln!(reports, "{},{},{method},{}", f.run, f.split.fold_id, r.csv_row());
        }
    }
    write_text(&output.join("reports.csv"), &reports)
}

fn write_summary(s: &RunSummary, output: &Path) -> Result<()> {
    write_json(&output.join("aggregate.json"), s)?;
    let comparison = format!(
        "dataset,method,{}\n{},baseline,{}\n{},flma,{}\n",
        METRIC_NAMES.join(","),
        s.dataset,
        s.baseline.csv_row(),
        s.dataset,
        s.flma.csv_row()
    );
    write_text(&output.join("comparison.csv"), &comparison)
}

/// Writes the artefacts of a cross-validation run below `output`.
pub fn write_run(
    outcome: &RunOutcome,
    config: &RunConfig,
    label_names: &[String],
    output: &Path,
) -> Result<()> {
    create_dir(output)?;
    write_text(&output.join("config.txt"), &config.to_config_text())?;
    for f in &outcome.folds {
        write_fold(f, label_names, output, config.trace)?;
    }
    write_reports(&outcome.folds, output)?;
    write_summary(&outcome.summary, output)
}

/// Loads the configured dataset, cross-validates and writes every artefact.
/// A failing fold leaves an `error.txt` in its directory; the remaining
/// folds are still written before the first failure is returned.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let dataset = config.dataset.load()?;
    log::info!(
        "{}: {} instances, {} features, {} labels",
        config.dataset.name(),
        dataset.instance_count(),
        dataset.feature_count(),
        dataset.label_count()
    );
    let output = &config.output;
    create_dir(output)?;
    write_text(&output.join("config.txt"), &config.to_config_text())?;

    let mut folds = Vec::new();
    let mut failures = Vec::new();
    for r in fold_results(&dataset, config)? {
        match r {
            Ok(f) => {
                write_fold(&f, dataset.label_names(), output, config.trace)?;
                folds.push(f);
            }
            Err(fail) => {
                log::error!("run {} fold {}: {}", fail.run, fail.fold_id, fail.error);
                let dir = fold_dir(output, fail.run, fail.fold_id);
                create_dir(&dir)?;
                write_text(&dir.join("error.txt"), &format!("{}\n", fail.error))?;
                failures.push(fail);
            }
        }
    }
    write_reports(&folds, output)?;
    if let Some(first) = failures.into_iter().next() {
        return Err(first.error);
    }
    let summary = summarize(&folds, config)?;
    write_summary(&summary, output)?;
    Ok(RunOutcome { folds, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct MineSummary {
    pub instances: usize,
    pub labels: usize,
    pub cp_rules: usize,
    pub ca_rules: usize,
    pub cleaned_rules: usize,
    pub params: MiningParams,
}

/// Mines the whole dataset and writes `rules.tsv` (cleaned and ordered),
/// `cp_rules.tsv`, `ca_rules.tsv` and `summary.json`.
pub fn mine_to_dir(
    dataset: &MultiLabelDataset,
    params: &MiningParams,
    output: &Path,
) -> Result<MineSummary> {
    let mined = mine_cp_ca(dataset, params)?;
    let cleaned = clean_rules(&mined.cp, &mined.ca);
    create_dir(output)?;
    let names = dataset.label_names();
    write_rules(output.join("rules.tsv"), &cleaned, names)?;
    write_rules(output.join("cp_rules.tsv"), &mined.cp, names)?;
    write_rules(output.join("ca_rules.tsv"), &mined.ca, names)?;
    let summary = MineSummary {
        instances: dataset.instance_count(),
        labels: dataset.label_count(),
        cp_rules: mined.cp.len(),
        ca_rules: mined.ca.len(),
        cleaned_rules: cleaned.len(),
        params: *params,
    };
    write_json(&output.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Result of correcting a standalone score matrix.
#[derive(Debug, Clone)]
pub struct CorrectOutcome {
    pub corrected: ScoreMatrix,
    pub labels: Array2<u8>,
    pub thresholds: CertaintyThresholds,
    pub trace: CorrectionTrace,
    pub summary: CorrectionSummary,
}

/// Corrects `scores` with `rules`; thresholds are fitted on `scores` unless
/// given.
pub fn correct_scores(
    scores: &ScoreMatrix,
    rules: &[AssociationRule],
    thresholds: Option<CertaintyThresholds>,
) -> Result<CorrectOutcome> {
    let thresholds = thresholds.unwrap_or_else(|| fit_thresholds(scores));
    let (corrected, trace, part) = correct(scores, rules, &thresholds)?;
    let labels = harden(&corrected);
    let summary = trace.summary(part.uncertain_count());
    Ok(CorrectOutcome {
        corrected,
        labels,
        thresholds,
        trace,
        summary,
    })
}
