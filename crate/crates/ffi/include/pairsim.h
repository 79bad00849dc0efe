#ifndef PAIRSIM_H
#define PAIRSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_ARGUMENT = 2,
  PS_STATUS_ILL_POSED = 3,
  PS_STATUS_NON_CONVERGENCE = 4,
  PS_STATUS_UNDEFINED_VALUE = 5,
  PS_STATUS_IO = 6,
  PS_STATUS_BUFFER_TOO_SMALL = 7,
  PS_STATUS_PANIC = 8,
} PsStatus;

typedef enum PsScoring {
  PS_SCORING_BT = 0,
  PS_SCORING_HODGERANK = 1,
} PsScoring;

// Comparison matrix handle.
typedef struct PsPcm PsPcm;

// Experiment results handle.
typedef struct PsReport PsReport;

// Settings for [`ps_experiment_run`].
typedef struct PsExperimentConfig {
  // Stimuli per synthetic reference; ignored when a dataset path is given.
  size_t n;
  // Synthetic references; ignored when a dataset path is given.
  size_t references;
  size_t repetitions;
  size_t subjects;
  uint64_t seed;
  enum PsScoring scoring;
  double init_value;
  // Worker threads, 0 for the global pool.
  size_t threads;
} PsExperimentConfig;

// One aggregate row. Undefined statistics are NaN.
typedef struct PsRow {
  // Index into the sampler list accepted by [`ps_sampler_name`].
  uint32_t sampler;
  double fraction;
  double plcc_mean;
  double plcc_std;
  double srocc_mean;
  double srocc_std;
  size_t repetitions;
  size_t references;
} PsRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL after a success.
// The pointer stays valid until the next call on the same thread.
const char *ps_last_error(void);

// Creates an `n × n` matrix with every off-diagonal cell set to `init_value`.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum PsStatus ps_pcm_new(size_t n, double init_value, struct PsPcm **out);

// Creates a matrix from `n * n` row-major counts.
//
// # Safety
// `counts` must point to `n * n` readable doubles and `out` must be writable.
enum PsStatus ps_pcm_from_counts(size_t n, const double *counts, struct PsPcm **out);

// Releases a matrix. NULL is ignored.
//
// # Safety
// `pcm` must come from this library and not have been freed already.
void ps_pcm_free(struct PsPcm *pcm);

// # Safety
// `pcm` must be a live handle and `out` writable.
enum PsStatus ps_pcm_dimension(const struct PsPcm *pcm, size_t *out);

// Records that `winner` was preferred over `loser`.
//
// # Safety
// `pcm` must be a live handle.
enum PsStatus ps_pcm_record(struct PsPcm *pcm, size_t winner, size_t loser);

// # Safety
// `pcm` must be a live handle and `out` writable.
enum PsStatus ps_pcm_count(const struct PsPcm *pcm, size_t i, size_t j, double *out);

// # Safety
// `pcm` must be a live handle and `out` writable.
enum PsStatus ps_pcm_total_comparisons(const struct PsPcm *pcm, double *out);

// Empirical probability that `i` is preferred over `j`.
//
// # Safety
// `pcm` must be a live handle and `out` writable.
enum PsStatus ps_pcm_preference(const struct PsPcm *pcm, size_t i, size_t j, double *out);

// Fits zero-mean quality scores into `out_scores`, which must hold `len >= n`.
//
// # Safety
// `pcm` must be a live handle and `out_scores` must hold `len` writable doubles.
enum PsStatus ps_fit_scores(const struct PsPcm *pcm,
                            enum PsScoring scoring,
                            double *out_scores,
                            size_t len);

// # Safety
// `x` and `y` must each hold `len` readable doubles and `out` must be writable.
enum PsStatus ps_plcc(const double *x, const double *y, size_t len, double *out);

// # Safety
// `x` and `y` must each hold `len` readable doubles and `out` must be writable.
enum PsStatus ps_srocc(const double *x, const double *y, size_t len, double *out);

// # Safety
// `out` must be writable.
enum PsStatus ps_fisher_z(double r, double *out);

// # Safety
// `out` must be writable.
enum PsStatus ps_budget_from_fraction(double fraction, size_t n, size_t subjects, size_t *out);

// Number of known samplers.
uint32_t ps_sampler_count(void);

// Static NUL-terminated name of sampler `index`, or NULL when out of range.
const char *ps_sampler_name(uint32_t index);

// Runs a budget sweep.
//
// `samplers` is a comma-separated list of sampler names. `dataset_path` may
// be NULL, in which case `config.references` synthetic references of
// `config.n` stimuli are generated from `config.seed`.
//
// # Safety
// `config` and `out` must be valid, `samplers` and (when non-NULL)
// `dataset_path` NUL-terminated, and `fractions` must hold `fraction_count`
// doubles.
enum PsStatus ps_experiment_run(const struct PsExperimentConfig *config,
                                const char *dataset_path,
                                const char *samplers,
                                const double *fractions,
                                size_t fraction_count,
                                struct PsReport **out);

// Releases a report. NULL is ignored.
//
// # Safety
// `report` must come from [`ps_experiment_run`] and not have been freed.
void ps_report_free(struct PsReport *report);

// # Safety
// `report` must be a live handle and `out` writable.
enum PsStatus ps_report_row_count(const struct PsReport *report, size_t *out);

// # Safety
// `report` must be a live handle and `out` writable.
enum PsStatus ps_report_row(const struct PsReport *report, size_t index, struct PsRow *out);

// Writes the results CSV, NUL-terminated, into `buf`.
//
// `out_len` receives the CSV length without the terminator. When `buf` is
// NULL or too small nothing is copied and `PS_STATUS_BUFFER_TOO_SMALL` is
// returned, so callers can size the buffer with a first call.
//
// # Safety
// `report` must be a live handle, `out_len` writable, and `buf` (when
// non-NULL) must hold `buf_len` writable bytes.
enum PsStatus ps_report_csv(const struct PsReport *report,
                            char *buf,
                            size_t buf_len,
                            size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAIRSIM_H */
