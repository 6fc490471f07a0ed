#ifndef SPARSEMUL_H
#define SPARSEMUL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which bound [`sm_sigma`] computes.
 */
typedef enum SmSigmaMethod {
  SM_SIGMA_METHOD_LP = 0,
  SM_SIGMA_METHOD_ALGEBRAIC = 1,
  SM_SIGMA_METHOD_OMEGA2 = 2,
  SM_SIGMA_METHOD_TRIVIAL = 3,
} SmSigmaMethod;

/**
 * Status codes returned by every fallible call.
 */
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INDEX_OUT_OF_RANGE = 2,
  SM_STATUS_VALUE_OUTSIDE_DOMAIN = 3,
  SM_STATUS_DIMENSION_MISMATCH = 4,
  SM_STATUS_DOMAIN_MISMATCH = 5,
  SM_STATUS_PARSE = 6,
  SM_STATUS_IO = 7,
  SM_STATUS_OVERFLOW = 8,
  SM_STATUS_NOT_ISOLATED = 9,
  SM_STATUS_INVALID_ARGUMENT = 10,
  SM_STATUS_BUFFER_TOO_SMALL = 11,
  SM_STATUS_PANIC = 12,
} SmStatus;

/**
 * Opaque matrix handle.
 */
typedef struct SmMatrix SmMatrix;

/**
 * Options for [`sm_multiply`]; start from [`sm_options_default`].
 */
typedef struct SmOptions {
  uint64_t seed;
  /**
   * Nonzero selects random hashing instead of the deterministic family.
   */
  int32_t random_hash;
  /**
   * Heavy/light threshold; 0 picks it from the input size.
   */
  uint64_t delta;
  /**
   * Nonzero multiplies heavy parts with Strassen instead of the cubic loop.
   */
  int32_t strassen;
} SmOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. Valid until
 * the next call on the same thread.
 */
const char *sm_last_error(void);

struct SmOptions sm_options_default(void);

/**
 * Builds a matrix from `nnz` triplets. `domain` is one of `bool`, `nonneg`,
 * `int`, `bigint`, `gf2`, `zmod:<k>`; duplicates are summed.
 *
 * # Safety
 * The three arrays must hold `nnz` elements each (they may be null when
 * `nnz` is 0) and `domain` must be a NUL-terminated string.
 */
enum SmStatus sm_matrix_new(const char *domain,
                            size_t rows,
                            size_t cols,
                            const size_t *row_idx,
                            const size_t *col_idx,
                            const int64_t *values,
                            size_t nnz,
                            struct SmMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed; null is ignored.
 */
void sm_matrix_free(struct SmMatrix *m);

/**
 * # Safety
 * `m` must be a live handle or null (which yields 0).
 */
size_t sm_matrix_rows(const struct SmMatrix *m);

/**
 * # Safety
 * `m` must be a live handle or null (which yields 0).
 */
size_t sm_matrix_cols(const struct SmMatrix *m);

/**
 * # Safety
 * `m` must be a live handle or null (which yields 0).
 */
size_t sm_matrix_nnz(const struct SmMatrix *m);

/**
 * Copies the entries in `(row, col)` order into arrays of capacity `cap`,
 * which must be at least the matrix's nnz. Boolean entries read as 1.
 *
 * # Safety
 * `m` must be a live handle; each array must hold `cap` elements.
 */
enum SmStatus sm_matrix_entries(const struct SmMatrix *m,
                                size_t *row_idx,
                                size_t *col_idx,
                                int64_t *values,
                                size_t cap);

/**
 * # Safety
 * `domain` and `path` must be NUL-terminated strings; `out` must be valid.
 */
enum SmStatus sm_matrix_read_mtx(const char *domain, const char *path, struct SmMatrix **out);

/**
 * # Safety
 * `m` must be a live handle and `path` a NUL-terminated string.
 */
enum SmStatus sm_matrix_write_mtx(const struct SmMatrix *m, const char *path);

/**
 * `out = a·b` through the output-sensitive pipeline. `opts` may be null for
 * defaults.
 *
 * # Safety
 * `a`, `b` must be live handles, `opts` null or valid, `out` valid.
 */
enum SmStatus sm_multiply(const struct SmMatrix *a,
                          const struct SmMatrix *b,
                          const struct SmOptions *opts,
                          struct SmMatrix **out);

/**
 * `out = a·b` by direct row-by-row accumulation.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` valid.
 */
enum SmStatus sm_naive_multiply(const struct SmMatrix *a,
                                const struct SmMatrix *b,
                                struct SmMatrix **out);

/**
 * Sets `*ok` to 1 when `c = a·b` (Freivalds' check with `repetitions`
 * rounds; exact comparison for Boolean matrices), else 0.
 *
 * # Safety
 * All handles must be live and `ok` valid.
 */
enum SmStatus sm_verify(const struct SmMatrix *a,
                        const struct SmMatrix *b,
                        const struct SmMatrix *c,
                        size_t repetitions,
                        uint64_t seed,
                        int32_t *ok);

/**
 * Upper bound on `σ(r)` for `r ∈ [0, 2]`, with the built-in table of
 * rectangular bounds for the `Lp` method.
 *
 * # Safety
 * `out` must be valid.
 */
enum SmStatus sm_sigma(double r, enum SmSigmaMethod method, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPARSEMUL_H */
