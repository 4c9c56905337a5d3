#ifndef SYMSEP_H
#define SYMSEP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero means success.
 */
typedef enum SymsepStatus {
  SYMSEP_STATUS_OK = 0,
  SYMSEP_STATUS_INVALID_ARGUMENT = 1,
  SYMSEP_STATUS_SHAPE = 2,
  SYMSEP_STATUS_NOT_DENSITY_MATRIX = 3,
  SYMSEP_STATUS_SIZE_LIMIT = 4,
  SYMSEP_STATUS_NUMERICAL = 5,
  SYMSEP_STATUS_IO = 6,
  SYMSEP_STATUS_FORMAT = 7,
  SYMSEP_STATUS_NULL_POINTER = 8,
  SYMSEP_STATUS_PANIC = 9,
} SymsepStatus;

/**
 * Opaque state handle.
 */
typedef struct SymsepState SymsepState;

/**
 * Summary of a detection run.
 */
typedef struct SymsepDetection {
  /**
   * 1 when a violation (or, for pure input, a nonzero basis overlap) was found.
   */
  int32_t entangled;
  size_t trials_run;
  size_t violations;
  /**
   * 0 when no trial violated.
   */
  size_t first_violation_trial;
  double max_margin;
} SymsepDetection;

/**
 * Partial-transpose check.
 */
typedef struct SymsepPpt {
  /**
   * 1 when the partial transpose has a negative eigenvalue.
   */
  int32_t npt;
  double min_eigenvalue;
  double negativity;
} SymsepPpt;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a pure state from `len` complex coefficients, normalizing them.
 *
 * # Safety
 * `dims` must point to `n_dims` values, `re` and `im` to `len` values each,
 * and `out` must be writable.
 */
enum SymsepStatus symsep_state_pure(const size_t *dims,
                                    size_t n_dims,
                                    const double *re,
                                    const double *im,
                                    size_t len,
                                    struct SymsepState **out);

/**
 * Builds a density matrix from row-major `side × side` real and imaginary parts.
 *
 * # Safety
 * `dims` must point to `n_dims` values, `re` and `im` to `side * side`
 * values each, and `out` must be writable.
 */
enum SymsepStatus symsep_state_mixed(const size_t *dims,
                                     size_t n_dims,
                                     const double *re,
                                     const double *im,
                                     size_t side,
                                     struct SymsepState **out);

/**
 * Reads a state file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum SymsepStatus symsep_state_load(const char *path, struct SymsepState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must come from a constructor in this library and not be used afterwards.
 */
void symsep_state_free(struct SymsepState *state);

/**
 * Total Hilbert-space dimension, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t symsep_state_dimension(const struct SymsepState *state);

/**
 * 1 for a pure state, 0 for a density matrix, -1 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
int32_t symsep_state_is_pure(const struct SymsepState *state);

/**
 * Concurrence of a pure state (mixed states are rejected).
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum SymsepStatus symsep_concurrence(const struct SymsepState *state, double *out);

/**
 * Random-witness detection. For pure states the verdict comes from the
 * complete basis check and the sampling fields are still filled in.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum SymsepStatus symsep_detect(const struct SymsepState *state,
                                size_t trials,
                                uint64_t seed,
                                int32_t full_stats,
                                struct SymsepDetection *out);

/**
 * Partial transpose on `subsystem` (1-based) of a bipartite state.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum SymsepStatus symsep_ppt(const struct SymsepState *state,
                             size_t subsystem,
                             struct SymsepPpt *out);

/**
 * Two-qubit spin-flip concurrence.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum SymsepStatus symsep_wootters(const struct SymsepState *state, double *out);

/**
 * Message for the most recent failure on this thread, or null.
 */
const char *symsep_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *symsep_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMSEP_H */
