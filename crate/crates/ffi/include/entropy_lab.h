#ifndef ENTROPY_LAB_H
#define ENTROPY_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ElStatus {
  EL_STATUS_OK = 0,
  EL_STATUS_NULL_POINTER = 1,
  EL_STATUS_INVALID_INPUT = 2,
  EL_STATUS_DATA_ERROR = 3,
  EL_STATUS_NUMERIC_ERROR = 4,
  EL_STATUS_PANIC = 5,
} ElStatus;

typedef enum ElEstimator {
  EL_ESTIMATOR_BAEE = 0,
  EL_ESTIMATOR_UMVUE = 1,
  EL_ESTIMATOR_MLE = 2,
  EL_ESTIMATOR_RMLE = 3,
  EL_ESTIMATOR_STEIN = 4,
  EL_ESTIMATOR_IMPROVED_MLE = 5,
  EL_ESTIMATOR_IMPROVED_RMLE = 6,
  EL_ESTIMATOR_BREWSTER_ZIDEK = 7,
  EL_ESTIMATOR_PITMAN_CLIPPED = 8,
} ElEstimator;

typedef enum ElLossKind {
  EL_LOSS_KIND_SQUARED = 0,
  EL_LOSS_KIND_LINEX = 1,
} ElLossKind;

typedef enum ElIntervalMethod {
  EL_INTERVAL_METHOD_ACI = 0,
  EL_INTERVAL_METHOD_BOOT_P = 1,
  EL_INTERVAL_METHOD_BOOT_T = 2,
  EL_INTERVAL_METHOD_GCI = 3,
  EL_INTERVAL_METHOD_HPD = 4,
} ElIntervalMethod;

/**
 * Opaque two-sample data set.
 */
typedef struct ElDataset ElDataset;

typedef struct ElLoss {
  enum ElLossKind kind;
  /**
   * Linex shape; ignored for squared error.
   */
  double a1;
} ElLoss;

typedef struct ElInterval {
  double lower;
  double upper;
  double length;
} ElInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy two samples of length `n` into a new data set.
 *
 * # Safety
 * `x1` and `x2` must point to `n` readable doubles; `out` must be writable.
 */
enum ElStatus el_dataset_new(const double *x1, const double *x2, size_t n, struct ElDataset **out);

/**
 * The built-in air-conditioning failure-time data (n = 6).
 *
 * # Safety
 * `out` must be writable.
 */
enum ElStatus el_dataset_boeing(struct ElDataset **out);

/**
 * Release a data set. Null is ignored.
 *
 * # Safety
 * `ds` must come from this library and not be used afterwards.
 */
void el_dataset_free(struct ElDataset *ds);

/**
 * Per-sample size, or 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t el_dataset_n(const struct ElDataset *ds);

/**
 * Point estimate of `ln σ`.
 *
 * # Safety
 * `ds` must be a live handle and `out` writable.
 */
enum ElStatus el_estimate(const struct ElDataset *ds,
                          enum ElEstimator estimator,
                          struct ElLoss loss,
                          double *out);

/**
 * `1 + ln 2π + 2τ`.
 */
double el_entropy_from_log_sigma(double tau);

/**
 * Interval for `ln σ` at `level` with default inner sizes: 10,000 pivot
 * draws, 3,000 bootstrap resamples, 12,000 chain iterations with 2,000
 * burn-in.
 *
 * # Safety
 * `ds` must be a live handle and `out` writable.
 */
enum ElStatus el_interval(const struct ElDataset *ds,
                          enum ElIntervalMethod method,
                          double level,
                          uint64_t seed,
                          struct ElInterval *out);

/**
 * Copy the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t el_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *el_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROPY_LAB_H */
