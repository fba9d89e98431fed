#ifndef SUMMA_H
#define SUMMA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum SummaStatus {
  SUMMA_STATUS_OK = 0,
  SUMMA_STATUS_NULL_POINTER = 1,
  SUMMA_STATUS_DOMAIN = 2,
  SUMMA_STATUS_ACCURACY = 3,
  SUMMA_STATUS_SINGULARITY = 4,
  SUMMA_STATUS_IO = 5,
  SUMMA_STATUS_PARSE = 6,
  SUMMA_STATUS_PANIC = 7,
} SummaStatus;

typedef enum SummaKind {
  SUMMA_KIND_MOBIUS = 0,
  SUMMA_KIND_LIOUVILLE = 1,
} SummaKind;

typedef enum SummaTarget {
  SUMMA_TARGET_MERTENS = 0,
  SUMMA_TARGET_LIOUVILLE = 1,
} SummaTarget;

/**
 * Values of μ or λ over a half-open range.
 */
typedef struct SummaSignBlock SummaSignBlock;

/**
 * A checkpointed walk of `M(x)` and `L(x)`.
 */
typedef struct SummaWalk SummaWalk;

typedef struct SummaCheckpoint {
  uint64_t x;
  int64_t m;
  int64_t l;
} SummaCheckpoint;

/**
 * Walk statistics. `first_pos_l` and `first_nonneg_l` are 0 when the
 * event did not occur.
 */
typedef struct SummaWalkSummary {
  uint64_t n_max;
  uint64_t first_pos_l;
  uint64_t first_nonneg_l;
  int64_t min_m;
  uint64_t argmin_m;
  int64_t max_m;
  uint64_t argmax_m;
  int64_t min_l;
  uint64_t argmin_l;
  int64_t max_l;
  uint64_t argmax_l;
  uint64_t sign_changes_m;
  uint64_t sign_changes_l;
} SummaWalkSummary;

typedef struct SummaComplex {
  double re;
  double im;
} SummaComplex;

typedef struct SummaQuadrature {
  double approx;
  int64_t exact;
  double abs_error;
  uint64_t evaluations;
} SummaQuadrature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *summa_version(void);

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *summa_last_error(void);

/**
 * `μ(n)` for `1 <= n <= 10^12`.
 */
enum SummaStatus summa_mobius(uint64_t n, int8_t *out);

/**
 * `λ(n)` for `1 <= n <= 10^12`.
 */
enum SummaStatus summa_liouville(uint64_t n, int8_t *out);

/**
 * Sieves `kind` over `[lo, hi)` into a new handle.
 */
enum SummaStatus summa_sign_block_new(uint64_t lo,
                                      uint64_t hi,
                                      enum SummaKind kind,
                                      struct SummaSignBlock **out);

/**
 * Number of values in the block; 0 for a null handle.
 *
 * # Safety
 * `block` is null or a live handle from `summa_sign_block_new`.
 */
size_t summa_sign_block_len(const struct SummaSignBlock *block);

/**
 * First value of the block (for `n = lo`); null for a null handle. Valid
 * until the handle is freed.
 *
 * # Safety
 * `block` is null or a live handle from `summa_sign_block_new`.
 */
const int8_t *summa_sign_block_values(const struct SummaSignBlock *block);

/**
 * # Safety
 * `block` is null or a handle from `summa_sign_block_new` not yet freed.
 */
void summa_sign_block_free(struct SummaSignBlock *block);

/**
 * Walks `x = 1..=n_max`, keeping a checkpoint at every multiple of
 * `stride` and at each sign change or new extreme. `workers = 0` uses
 * every available core.
 */
enum SummaStatus summa_walk_new(uint64_t n_max,
                                uint64_t stride,
                                uint32_t workers,
                                struct SummaWalk **out);

/**
 * # Safety
 * `walk` is null or a live handle from `summa_walk_new`.
 */
size_t summa_walk_checkpoint_count(const struct SummaWalk *walk);

/**
 * # Safety
 * `walk` is null or a live handle; `out` is null or valid for writes.
 */
enum SummaStatus summa_walk_checkpoint(const struct SummaWalk *walk,
                                       size_t index,
                                       struct SummaCheckpoint *out);

/**
 * # Safety
 * `walk` is null or a live handle; `out` is null or valid for writes.
 */
enum SummaStatus summa_walk_summary(const struct SummaWalk *walk, struct SummaWalkSummary *out);

/**
 * # Safety
 * `walk` is null or a handle from `summa_walk_new` not yet freed.
 */
void summa_walk_free(struct SummaWalk *walk);

/**
 * `ζ(re + i·im)` with the default Euler–Maclaurin parameters.
 */
enum SummaStatus summa_zeta(double re, double im, struct SummaComplex *out);

/**
 * Truncated Perron integral at height `t_max` with the default step.
 */
enum SummaStatus summa_perron(enum SummaTarget target,
                              double x,
                              double t_max,
                              struct SummaQuadrature *out);

/**
 * `−1/ζ(1/2)`.
 */
enum SummaStatus summa_leading_constant(double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMMA_H */
