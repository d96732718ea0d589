#ifndef ADG_H
#define ADG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum AdgStatus {
  ADG_STATUS_OK = 0,
  /**
   * Bad parameters, malformed equations, or a non prime power order.
   */
  ADG_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The instance is too large for the id space, a size limit or the
   * memory budget.
   */
  ADG_STATUS_RESOURCE_REFUSAL = 2,
  /**
   * The eigensolver did not reach its tolerance.
   */
  ADG_STATUS_NOT_CONVERGED = 3,
  ADG_STATUS_NULL_POINTER = 4,
  /**
   * The output buffer cannot hold the result; the needed length was written.
   */
  ADG_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  ADG_STATUS_INTERNAL = 6,
} AdgStatus;

typedef enum AdgFamily {
  ADG_FAMILY_D = 0,
  ADG_FAMILY_A = 1,
} AdgFamily;

typedef enum AdgMethod {
  ADG_METHOD_AUTO = 0,
  ADG_METHOD_DENSE = 1,
  ADG_METHOD_ITERATIVE = 2,
} AdgMethod;

/**
 * Opaque graph handle.
 */
typedef struct AdgGraph AdgGraph;

/**
 * A cycle length or, when `exact` is false, a lower bound (the cap).
 */
typedef struct AdgGirth {
  uint32_t value;
  bool exact;
} AdgGirth;

typedef struct AdgSpectrum {
  double lambda1;
  double lambda2;
  /**
   * `2 sqrt(q)`.
   */
  double bound;
  double margin;
  /**
   * Final residual of the iterative method, negative for the dense one.
   */
  double residual;
  uint64_t components;
} AdgSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *adg_last_error(void);

/**
 * Library version as a static string.
 */
const char *adg_version(void);

/**
 * Builds `D(n, q)` or `A(n, q)` over the default field of order `q`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AdgStatus adg_graph_new(enum AdgFamily family, size_t n, uint64_t q, struct AdgGraph **out);

/**
 * Builds a graph from equation text (`p2 + l2 = p1*l1` lines) over the
 * default field of order `q`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be valid for writes.
 */
enum AdgStatus adg_graph_from_system(const char *text, uint64_t q, struct AdgGraph **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void adg_graph_free(struct AdgGraph *g);

/**
 * Number of vertices, `2 q^n`. Points have ids below `q^n`, lines the rest.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_graph_order(const struct AdgGraph *g, uint64_t *out);

/**
 * Neighbor ids of vertex `id`, ordered by the neighbor's first coordinate.
 * Writes the neighbor count to `len`; if `cap` is smaller, returns
 * `BufferTooSmall` without touching `buf`.
 *
 * # Safety
 * `g` must be a live handle, `buf` valid for `cap` writes, `len` valid for writes.
 */
enum AdgStatus adg_graph_neighbors(const struct AdgGraph *g,
                                   uint64_t id,
                                   uint64_t *buf,
                                   size_t cap,
                                   size_t *len);

/**
 * Whether point id `point` and line id `line` are adjacent.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_graph_adjacent(const struct AdgGraph *g,
                                  uint64_t point,
                                  uint64_t line,
                                  bool *out);

/**
 * Girth below `cap` (0 selects `2n + 8`). With `full` false only cycles
 * through the origin are searched.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_girth(const struct AdgGraph *g, uint32_t cap, bool full, struct AdgGirth *out);

/**
 * Shortest cycle through the origin point (0 selects cap `2n + 8`).
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_cycle_through_origin(const struct AdgGraph *g,
                                        uint32_t cap,
                                        struct AdgGirth *out);

/**
 * Number of connected components.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_components(const struct AdgGraph *g, uint64_t *out);

/**
 * Two largest adjacency eigenvalues.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum AdgStatus adg_lambda2(const struct AdgGraph *g,
                           enum AdgMethod method,
                           bool per_component,
                           uint64_t seed,
                           struct AdgSpectrum *out);

/**
 * Checks the coordinate map `D(2k+1, q) -> A(k+2, q)` for the covering
 * property. `samples` of 0 checks exhaustively.
 *
 * # Safety
 * `passed` must be valid for writes.
 */
enum AdgStatus adg_cover_check_lemma21(size_t k,
                                       uint64_t q,
                                       uint64_t samples,
                                       uint64_t seed,
                                       bool *passed);

/**
 * Lower and upper bounds on the largest edge count of an `n`-vertex graph
 * with no cycle of length at most `2k + 1`.
 *
 * # Safety
 * `lower` and `upper` must be valid for writes.
 */
enum AdgStatus adg_turan_bounds(uint64_t n, uint32_t k, double *lower, double *upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADG_H */
