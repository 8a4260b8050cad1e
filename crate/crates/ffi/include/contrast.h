#ifndef CONTRAST_H
#define CONTRAST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsMethod {
  CS_METHOD_LOCAL_SEARCH = 0,
  CS_METHOD_SDP = 1,
  CS_METHOD_SDP_LOCAL_SEARCH = 2,
} CsMethod;

/**
 * Outcome of every fallible call.
 */
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_UTF8 = 2,
  CS_STATUS_IO = 3,
  CS_STATUS_PARSE = 4,
  CS_STATUS_GRAPH = 5,
  CS_STATUS_TIME_SERIES = 6,
  CS_STATUS_DIMENSION = 7,
  CS_STATUS_ALPHA = 8,
  CS_STATUS_ARGUMENT = 9,
  CS_STATUS_SOLVER = 10,
  CS_STATUS_BUFFER_TOO_SMALL = 11,
  CS_STATUS_PANIC = 12,
} CsStatus;

typedef enum CsLabel {
  CS_LABEL_A = 0,
  CS_LABEL_B = 1,
} CsLabel;

/**
 * A group under construction or loaded from a manifest.
 */
typedef struct CsGroup CsGroup;

typedef struct CsResult CsResult;

/**
 * Solver settings; obtain defaults from [`cs_solver_config_default`].
 */
typedef struct CsSolverConfig {
  size_t restarts;
  size_t local_search_max_passes;
  /**
   * 0 selects the rank from the instance size.
   */
  size_t sdp_rank;
  size_t sdp_max_iters;
  double sdp_tol;
  size_t rounding_samples;
  uint64_t rng_seed;
  enum CsMethod method;
} CsSolverConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. Valid until the next
 * call on the same thread.
 */
const char *cs_last_error(void);

struct CsSolverConfig cs_solver_config_default(void);

/**
 * Empty group of graphs over `n` vertices.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CsStatus cs_group_new(enum CsLabel label, size_t n, struct CsGroup **out);

/**
 * Adds an unweighted subject graph given as `edge_count` pairs in `edges`
 * (`u0, v0, u1, v1, ...`, 0-based).
 *
 * # Safety
 * `group` must come from this library; `subject_id` must be a NUL-terminated string;
 * `edges` must point to `2 * edge_count` readable values (may be null when the count is 0).
 */
enum CsStatus cs_group_add_graph(struct CsGroup *group,
                                 const char *subject_id,
                                 const size_t *edges,
                                 size_t edge_count);

/**
 * Loads a group from a manifest of edge lists or adjacency CSVs. `aliases` may be null or
 * a string such as `TD=A,ASD=B`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum CsStatus cs_group_load(const char *manifest, const char *aliases, struct CsGroup **out);

/**
 * Number of subjects; 0 for a null handle.
 *
 * # Safety
 * `group` must be null or come from this library.
 */
size_t cs_group_len(const struct CsGroup *group);

/**
 * # Safety
 * `group` must be null or an unfreed handle from this library.
 */
void cs_group_free(struct CsGroup *group);

/**
 * Contrast subgraph dense in `a` and sparse in `b`, or the symmetric variant. `alpha` uses
 * the command-line syntax (`0.8`, `80`, `p90`). `config` may be null for defaults.
 *
 * # Safety
 * Handles must come from this library; `alpha` must be NUL-terminated; `out` writable.
 */
enum CsStatus cs_extract(const struct CsGroup *a,
                         const struct CsGroup *b,
                         const char *alpha,
                         bool symmetric,
                         const struct CsSolverConfig *config,
                         struct CsResult **out);

/**
 * # Safety
 * `result` must be null or come from this library.
 */
size_t cs_result_len(const struct CsResult *result);

/**
 * # Safety
 * `result` must be null or come from this library.
 */
double cs_result_objective(const struct CsResult *result);

/**
 * # Safety
 * `result` must be null or come from this library.
 */
double cs_result_alpha(const struct CsResult *result);

/**
 * Copies the sorted vertex ids into `buf`, which must hold `cs_result_len` values.
 *
 * # Safety
 * `buf` must point to `cap` writable values.
 */
enum CsStatus cs_result_vertices(const struct CsResult *result, size_t *buf, size_t cap);

/**
 * JSON rendering of the result; release with [`cs_string_free`].
 *
 * # Safety
 * `result` must come from this library; `out` must be writable.
 */
enum CsStatus cs_result_to_json(const struct CsResult *result, char **out);

/**
 * # Safety
 * `result` must be null or an unfreed handle from this library.
 */
void cs_result_free(struct CsResult *result);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void cs_string_free(char *s);

/**
 * Maximizes `sum_{u<v in S} (w[u][v] - alpha)` over vertex sets. `weights` is a row-major
 * symmetric `n x n` matrix (diagonal ignored). Writes the set to `out_vertices` (room for
 * `n` values), its size to `out_len` and the value to `out_value`.
 *
 * # Safety
 * `weights` must hold `n * n` readable values; output pointers must be writable.
 */
enum CsStatus cs_solve_goqc(size_t n,
                            const double *weights,
                            double alpha,
                            const struct CsSolverConfig *config,
                            size_t *out_vertices,
                            size_t *out_len,
                            double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTRAST_H */
