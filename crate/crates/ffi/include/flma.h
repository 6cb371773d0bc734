#ifndef FLMA_H
#define FLMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum {
  FLMA_STATUS_OK = 0,
  FLMA_STATUS_NULL_POINTER = 1,
  FLMA_STATUS_INVALID_ARGUMENT = 2,
  FLMA_STATUS_IO = 3,
  FLMA_STATUS_PARSE = 4,
  FLMA_STATUS_DIMENSION = 5,
  FLMA_STATUS_LABEL_MISMATCH = 6,
  FLMA_STATUS_FORMAT = 7,
  FLMA_STATUS_PANIC = 8,
} FlmaStatus;

/**
 * Loaded multi-label dataset.
 */
typedef struct FlmaDataset FlmaDataset;

/**
 * Fitted ML-KNN model.
 */
typedef struct FlmaMlKnn FlmaMlKnn;

/**
 * Ordered rule list together with the label names it refers to.
 */
typedef struct FlmaRules FlmaRules;

/**
 * Mining thresholds; see [`flma_mining_params_default`].
 */
typedef struct {
  double min_sup_cp;
  double min_conf_cp;
  double min_sup_ca;
  double min_conf_ca;
  size_t max_labelset_size;
  bool use_frequency_filter;
} FlmaMiningParams;

/**
 * The seven evaluation measures.
 */
typedef struct {
  double hamming_loss;
  double ranking_loss;
  double one_error;
  double subset_accuracy;
  double macro_f1;
  double micro_f1;
  double accuracy;
} FlmaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *flma_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *flma_version(void);

/**
 * Loads an ARFF data file with its XML label declaration.
 */
FlmaStatus flma_dataset_load_arff(const char *data_path, const char *xml_path, FlmaDataset **out);

/**
 * Loads a CSV whose last `label_count` columns are binary labels.
 */
FlmaStatus flma_dataset_load_csv(const char *path, size_t label_count, FlmaDataset **out);

/**
 * Builds a dataset from row-major `features` (`n x d`) and `labels`
 * (`n x c`, values 0 or 1). Names are generated as `x0..` and `y0..`.
 */
FlmaStatus flma_dataset_from_arrays(const double *features, const uint8_t *labels, size_t n, size_t d, size_t c, FlmaDataset **out);

/**
 * Instance, feature and label counts. Any output pointer may be NULL.
 */
FlmaStatus flma_dataset_shape(const FlmaDataset *dataset, size_t *instances, size_t *features, size_t *labels);

/**
 * Fraction of instances carrying `label`.
 */
FlmaStatus flma_dataset_label_support(const FlmaDataset *dataset, size_t label, double *out);

void flma_dataset_free(FlmaDataset *dataset);

FlmaMiningParams flma_mining_params_default(void);

/**
 * Mines CP and CA rules from `dataset` and returns them cleaned and ordered.
 * `params` may be NULL for the defaults.
 */
FlmaStatus flma_rules_mine(const FlmaDataset *dataset, const FlmaMiningParams *params, FlmaRules **out);

FlmaStatus flma_rules_len(const FlmaRules *rules, size_t *out);

/**
 * Writes the rules in the tab-separated text format.
 */
FlmaStatus flma_rules_save(const FlmaRules *rules, const char *path);

/**
 * Reads a rules file whose label names must belong to `dataset`.
 */
FlmaStatus flma_rules_load(const char *path, const FlmaDataset *dataset, FlmaRules **out);

void flma_rules_free(FlmaRules *rules);

/**
 * Fits ML-KNN with `k` neighbours and smoothing `s`.
 */
FlmaStatus flma_mlknn_fit(const FlmaDataset *dataset, size_t k, double s, FlmaMlKnn **out);

/**
 * Scores `rows x feature_count` query features into `out`
 * (`rows x label_count`).
 */
FlmaStatus flma_mlknn_predict(const FlmaMlKnn *model, const double *features, size_t rows, size_t cols, double *out);

/**
 * Leave-one-out scores of the training instances
 * (`instances x label_count`).
 */
FlmaStatus flma_mlknn_training_scores(const FlmaMlKnn *model, double *out);

void flma_mlknn_free(FlmaMlKnn *model);

/**
 * Fits the certainty thresholds to a score matrix.
 */
FlmaStatus flma_fit_thresholds(const double *scores, size_t rows, size_t cols, double *lower, double *upper);

/**
 * Corrects `scores` (`rows x cols`) with `rules` using thresholds
 * `lower`/`upper`, writing `rows x cols` values to `out`. `applications`
 * receives the number of rule applications and may be NULL.
 */
FlmaStatus flma_correct(const double *scores, size_t rows, size_t cols, const FlmaRules *rules, double lower, double upper, double *out, size_t *applications);

/**
 * Thresholds `len` scores at 0.5 into `out`.
 */
FlmaStatus flma_harden(const double *scores, size_t len, uint8_t *out);

/**
 * Evaluates predictions and scores against the truth, all `rows x cols`.
 */
FlmaStatus flma_evaluate(const uint8_t *pred, const double *scores, const uint8_t *truth, size_t rows, size_t cols, FlmaReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLMA_H */
