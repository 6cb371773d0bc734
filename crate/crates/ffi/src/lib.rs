//! C ABI over the `flma` library.
//!
//! Every function returns a [`FlmaStatus`]. On failure a message is kept per
//! thread and can be read with [`flma_last_error`]. Handles are opaque and
//! must be released with the matching `_free` function. Matrices are dense,
//! row-major buffers.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use flma::classifier::MlKnnModel;
use flma::correction::CertaintyThresholds;
use flma::mining::{read_rules, write_rules};
use flma::{
    clean_rules, correct, evaluate, fit_mlknn, fit_thresholds, mine_cp_ca, AssociationRule,
    Error, MiningParams, MultiLabelDataset, ScoreMatrix,
};
use ndarray::Array2;

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlmaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Dimension = 5,
    LabelMismatch = 6,
    Format = 7,
    Panic = 8,
}

/// Loaded multi-label dataset.
pub struct FlmaDataset(MultiLabelDataset);

/// Ordered rule list together with the label names it refers to.
pub struct FlmaRules {
    rules: Vec<AssociationRule>,
    label_names: Vec<String>,
}

/// Fitted ML-KNN model.
pub struct FlmaMlKnn(MlKnnModel);

/// Mining thresholds; see [`flma_mining_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FlmaMiningParams {
    pub min_sup_cp: f64,
    pub min_conf_cp: f64,
    pub min_sup_ca: f64,
    pub min_conf_ca: f64,
    pub max_labelset_size: usize,
    pub use_frequency_filter: bool,
}

/// The seven evaluation measures.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FlmaReport {
    pub hamming_loss: f64,
    pub ranking_loss: f64,
    pub one_error: f64,
    pub subset_accuracy: f64,
    pub macro_f1: f64,
    pub micro_f1: f64,
    pub accuracy: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

fn status_of(e: &Error) -> FlmaStatus {
    match e {
        Error::Io { .. } => FlmaStatus::Io,
        Error::Parse { .. } => FlmaStatus::Parse,
        Error::InvalidArgument(_) => FlmaStatus::InvalidArgument,
        Error::Dimension(_) => FlmaStatus::Dimension,
        Error::LabelMismatch(_) => FlmaStatus::LabelMismatch,
        Error::Format(_) => FlmaStatus::Format,
    }
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> FlmaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlmaStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            FlmaStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            FlmaStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn path_arg(p: *const c_char, what: &'static str) -> FfiResult<PathBuf> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::invalid(format!("{what} is not valid UTF-8")))?;
    Ok(PathBuf::from(s))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &'static str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, what: &'static str) -> FfiResult<&'a mut [T]> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn cells(rows: usize, cols: usize) -> FfiResult<usize> {
    rows.checked_mul(cols)
        .ok_or_else(|| Error::invalid("matrix size overflows").into())
}

unsafe fn matrix_arg<T: Copy>(
    p: *const T,
    rows: usize,
    cols: usize,
    what: &'static str,
) -> FfiResult<Array2<T>> {
    let data = slice_arg(p, cells(rows, cols)?, what)?;
    Ok(Array2::from_shape_vec((rows, cols), data.to_vec()).expect("length checked"))
}

unsafe fn scores_arg(p: *const f64, rows: usize, cols: usize) -> FfiResult<ScoreMatrix> {
    Ok(ScoreMatrix::new(matrix_arg(p, rows, cols, "scores")?)?)
}

fn put<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for null first
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn flma_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn flma_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads an ARFF data file with its XML label declaration.
#[no_mangle]
pub unsafe extern "C" fn flma_dataset_load_arff(
    data_path: *const c_char,
    xml_path: *const c_char,
    out: *mut *mut FlmaDataset,
) -> FlmaStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let data = path_arg(data_path, "data_path")?;
        let xml = path_arg(xml_path, "xml_path")?;
        put(out, FlmaDataset(flma::io::load_mulan_arff(data, xml)?));
        Ok(())
    })
}

/// Loads a CSV whose last `label_count` columns are binary labels.
#[no_mangle]
pub unsafe extern "C" fn flma_dataset_load_csv(
    path: *const c_char,
    label_count: usize,
    out: *mut *mut FlmaDataset,
) -> FlmaStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let path = path_arg(path, "path")?;
        put(out, FlmaDataset(flma::io::load_csv(path, label_count)?));
        Ok(())
    })
}

/// Builds a dataset from row-major `features` (`n x d`) and `labels`
/// (`n x c`, values 0 or 1). Names are generated as `x0..` and `y0..`.
#[no_mangle]
pub unsafe extern "C" fn flma_dataset_from_arrays(
    features: *const f64,
    labels: *const u8,
    n: usize,
    d: usize,
    c: usize,
    out: *mut *mut FlmaDataset,
) -> FlmaStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let x = matrix_arg(features, n, d, "features")?;
        let y = matrix_arg(labels, n, c, "labels")?;
        let ds = MultiLabelDataset::new(
            x,
            y,
            (0..d).map(|i| format!("x{i}")).collect(),
            (0..c).map(|i| format!("y{i}")).collect(),
        )?;
        put(out, FlmaDataset(ds));
        Ok(())
    })
}

/// Instance, feature and label counts. Any output pointer may be NULL.
#[no_mangle]
pub unsafe extern "C" fn flma_dataset_shape(
    dataset: *const FlmaDataset,
    instances: *mut usize,
    features: *mut usize,
    labels: *mut usize,
) -> FlmaStatus {
    guard(|| {
        let ds = &deref(dataset, "dataset")?.0;
        if let Some(p) = instances.as_mut() {
            *p = ds.instance_count();
        }
        if let Some(p) = features.as_mut() {
            *p = ds.feature_count();
        }
        if let Some(p) = labels.as_mut() {
            *p = ds.label_count();
        }
        Ok(())
    })
}

/// Fraction of instances carrying `label`.
#[no_mangle]
pub unsafe extern "C" fn flma_dataset_label_support(
    dataset: *const FlmaDataset,
    label: usize,
    out: *mut f64,
) -> FlmaStatus {
    guard(|| {
        let ds = &deref(dataset, "dataset")?.0;
        let out = out.as_mut().ok_or(Failure::Null("out"))?;
        *out = ds.label_support(label)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn flma_dataset_free(dataset: *mut FlmaDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

#[no_mangle]
pub extern "C" fn flma_mining_params_default() -> FlmaMiningParams {
    let p = MiningParams::default();
    FlmaMiningParams {
        min_sup_cp: p.min_sup_cp,
        min_conf_cp: p.min_conf_cp,
        min_sup_ca: p.min_sup_ca,
        min_conf_ca: p.min_conf_ca,
        max_labelset_size: p.max_labelset_size,
        use_frequency_filter: p.use_frequency_filter,
    }
}

/// Mines CP and CA rules from `dataset` and returns them cleaned and ordered.
/// `params` may be NULL for the defaults.
#[no_mangle]
pub unsafe extern "C" fn flma_rules_mine(
    dataset: *const FlmaDataset,
    params: *const FlmaMiningParams,
    out: *mut *mut FlmaRules,
) -> FlmaStatus {
    guard(|| {
        let ds = &deref(dataset, "dataset")?.0;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let p = params.as_ref().copied().unwrap_or_else(|| flma_mining_params_default());
        let params = MiningParams {
            min_sup_cp: p.min_sup_cp,
            min_conf_cp: p.min_conf_cp,
            min_sup_ca: p.min_sup_ca,
            min_conf_ca: p.min_conf_ca,
            max_labelset_size: p.max_labelset_size,
            use_frequency_filter: p.use_frequency_filter,
        };
        let mined = mine_cp_ca(ds, &params)?;
        put(
            out,
            FlmaRules {
                rules: clean_rules(&mined.cp, &mined.ca),
                label_names: ds.label_names().to_vec(),
            },
        );
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn flma_rules_len(rules: *const FlmaRules, out: *mut usize) -> FlmaStatus {
    guard(|| {
        let r = deref(rules, "rules")?;
        *out.as_mut().ok_or(Failure::Null("out"))? = r.rules.len();
        Ok(())
    })
}

/// Writes the rules in the tab-separated text format.
#[no_mangle]
pub unsafe extern "C" fn flma_rules_save(rules: *const FlmaRules, path: *const c_char) -> FlmaStatus {
    guard(|| {
        let r = deref(rules, "rules")?;
        let path = path_arg(path, "path")?;
        write_rules(path, &r.rules, &r.label_names)?;
        Ok(())
    })
}

/// Reads a rules file whose label names must belong to `dataset`.
#[no_mangle]
pub unsafe extern "C" fn flma_rules_load(
    path: *const c_char,
    dataset: *const FlmaDataset,
    out: *mut *mut FlmaRules,
) -> FlmaStatus {
    guard(|| {
        let path = path_arg(path, "path")?;
        let ds = &deref(dataset, "dataset")?.0;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let names = ds.label_names().to_vec();
        let rules = read_rules(path, &names)?;
        put(
            out,
            FlmaRules {
                rules,
                label_names: names,
            },
        );
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn flma_rules_free(rules: *mut FlmaRules) {
    if !rules.is_null() {
        drop(Box::from_raw(rules));
    }
}

/// Fits ML-KNN with `k` neighbours and smoothing `s`.
#[no_mangle]
pub unsafe extern "C" fn flma_mlknn_fit(
    dataset: *const FlmaDataset,
    k: usize,
    s: f64,
    out: *mut *mut FlmaMlKnn,
) -> FlmaStatus {
    guard(|| {
        let ds = &deref(dataset, "dataset")?.0;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        put(out, FlmaMlKnn(fit_mlknn(ds, k, s)?));
        Ok(())
    })
}

/// Scores `rows x feature_count` query features into `out`
/// (`rows x label_count`).
#[no_mangle]
pub unsafe extern "C" fn flma_mlknn_predict(
    model: *const FlmaMlKnn,
    features: *const f64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> FlmaStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let x = matrix_arg(features, rows, cols, "features")?;
        let scores = m.predict_scores(&x)?;
        let dst = slice_out(out, cells(rows, m.label_count())?, "out")?;
        for (d, s) in dst.iter_mut().zip(scores.as_array().iter()) {
            *d = *s;
        }
        Ok(())
    })
}

/// Leave-one-out scores of the training instances
/// (`instances x label_count`).
#[no_mangle]
pub unsafe extern "C" fn flma_mlknn_training_scores(
    model: *const FlmaMlKnn,
    out: *mut f64,
) -> FlmaStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let scores = m.training_scores();
        let dst = slice_out(out, scores.as_array().len(), "out")?;
        for (d, s) in dst.iter_mut().zip(scores.as_array().iter()) {
            *d = *s;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn flma_mlknn_free(model: *mut FlmaMlKnn) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Fits the certainty thresholds to a score matrix.
#[no_mangle]
pub unsafe extern "C" fn flma_fit_thresholds(
    scores: *const f64,
    rows: usize,
    cols: usize,
    lower: *mut f64,
    upper: *mut f64,
) -> FlmaStatus {
    guard(|| {
        let s = scores_arg(scores, rows, cols)?;
        let lower = lower.as_mut().ok_or(Failure::Null("lower"))?;
        let upper = upper.as_mut().ok_or(Failure::Null("upper"))?;
        let t = fit_thresholds(&s);
        *lower = t.lower;
        *upper = t.upper;
        Ok(())
    })
}

/// Corrects `scores` (`rows x cols`) with `rules` using thresholds
/// `lower`/`upper`, writing `rows x cols` values to `out`. `applications`
/// receives the number of rule applications and may be NULL.
#[no_mangle]
pub unsafe extern "C" fn flma_correct(
    scores: *const f64,
    rows: usize,
    cols: usize,
    rules: *const FlmaRules,
    lower: f64,
    upper: f64,
    out: *mut f64,
    applications: *mut usize,
) -> FlmaStatus {
    guard(|| {
        let s = scores_arg(scores, rows, cols)?;
        let r = deref(rules, "rules")?;
        if r.label_names.len() != cols {
            return Err(Error::Dimension(format!(
                "rules cover {} labels but scores have {cols} columns",
                r.label_names.len()
            ))
            .into());
        }
        let thr = CertaintyThresholds::fixed(lower, upper)?;
        let (corrected, trace, _) = correct(&s, &r.rules, &thr)?;
        let dst = slice_out(out, cells(rows, cols)?, "out")?;
        for (d, v) in dst.iter_mut().zip(corrected.as_array().iter()) {
            *d = *v;
        }
        if let Some(a) = applications.as_mut() {
            *a = trace.len();
        }
        Ok(())
    })
}

/// Thresholds `len` scores at 0.5 into `out`.
#[no_mangle]
pub unsafe extern "C" fn flma_harden(scores: *const f64, len: usize, out: *mut u8) -> FlmaStatus {
    guard(|| {
        let s = scores_arg(scores, 1, len)?;
        let hard = flma::harden(&s);
        let dst = slice_out(out, len, "out")?;
        for (d, v) in dst.iter_mut().zip(hard.iter()) {
            *d = *v;
        }
        Ok(())
    })
}

/// Evaluates predictions and scores against the truth, all `rows x cols`.
#[no_mangle]
pub unsafe extern "C" fn flma_evaluate(
    pred: *const u8,
    scores: *const f64,
    truth: *const u8,
    rows: usize,
    cols: usize,
    out: *mut FlmaReport,
) -> FlmaStatus {
    guard(|| {
        let p = matrix_arg(pred, rows, cols, "pred")?;
        let s = scores_arg(scores, rows, cols)?;
        let t = matrix_arg(truth, rows, cols, "truth")?;
        let out = out.as_mut().ok_or(Failure::Null("out"))?;
        let r = evaluate(&p, &s, &t)?;
        *out = FlmaReport {
            hamming_loss: r.hamming_loss,
            ranking_loss: r.ranking_loss,
            one_error: r.one_error,
            subset_accuracy: r.subset_accuracy,
            macro_f1: r.macro_f1,
            micro_f1: r.micro_f1,
            accuracy: r.accuracy,
        };
        Ok(())
    })
}
