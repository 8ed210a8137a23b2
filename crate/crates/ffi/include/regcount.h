#ifndef REGCOUNT_H
#define REGCOUNT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_UTF8 = 2,
  RC_STATUS_PARSE = 3,
  RC_STATUS_INVALID_GRAPH = 4,
  RC_STATUS_DIVISIBILITY = 5,
  RC_STATUS_PARITY = 6,
  RC_STATUS_OUT_OF_RANGE = 7,
  RC_STATUS_SCALE = 8,
  RC_STATUS_TOO_LARGE = 9,
  RC_STATUS_DOMAIN = 10,
  RC_STATUS_STRUCTURE = 11,
  RC_STATUS_IO = 12,
  RC_STATUS_PANIC = 13,
} RcStatus;

typedef enum {
  RC_KIND_MATCHING = 0,
  RC_KIND_INDEPENDENT_SET = 1,
} RcKind;

/**
 * Verification commands run over every d-regular graph on n vertices.
 */
typedef enum {
  RC_CHECK_UMC = 0,
  RC_CHECK_KAHN = 1,
  RC_CHECK_SUITE = 2,
  RC_CHECK_ROOTS = 3,
  RC_CHECK_HOM = 4,
} RcCheck;

typedef enum {
  RC_FORMAT_JSON = 0,
  RC_FORMAT_CSV = 1,
} RcFormat;

typedef struct RcGraph RcGraph;

typedef struct RcGraphList RcGraphList;

typedef struct RcPoly RcPoly;

typedef struct {
  size_t records;
  size_t failed;
} RcSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *rc_version(void);

/**
 * Message of the last failed call on this thread, or NULL after a
 * success. The caller frees it with [`rc_string_free`].
 */
char *rc_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void rc_string_free(char *s);

/**
 * Builds a simple graph from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (it may be NULL
 * when `edge_count` is 0) and `out` must be writable.
 */
RcStatus rc_graph_new(size_t vertex_count, const size_t *edges, size_t edge_count, RcGraph **out);

/**
 * Parses one graph in the `n m loops` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` must be writable.
 */
RcStatus rc_graph_parse(const char *text, RcGraph **out);

/**
 * K_{d,d}.
 *
 * # Safety
 * `out` must be writable.
 */
RcStatus rc_graph_kdd(size_t d, RcGraph **out);

/**
 * n/2d disjoint copies of K_{d,d}.
 *
 * # Safety
 * `out` must be writable.
 */
RcStatus rc_graph_dk(size_t n, size_t d, RcGraph **out);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t rc_graph_vertex_count(const RcGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t rc_graph_edge_count(const RcGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
RcStatus rc_graph_to_text(const RcGraph *g, char **out);

/**
 * Isomorphism-invariant label, `n:bits`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
RcStatus rc_graph_canonical_label(const RcGraph *g, char **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void rc_graph_free(RcGraph *g);

/**
 * Exact matching or independence polynomial of `g`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
RcStatus rc_count_polynomial(const RcGraph *g, RcKind kind, RcPoly **out);

/**
 * Number of coefficients, one more than the degree.
 *
 * # Safety
 * `p` must be a live handle.
 */
size_t rc_poly_len(const RcPoly *p);

/**
 * Coefficient `k` as a decimal string; zero past the degree.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
RcStatus rc_poly_coefficient(const RcPoly *p, size_t k, char **out);

/**
 * Coefficient `k` as an integer; `RC_STATUS_TOO_LARGE` if it overflows.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
RcStatus rc_poly_coefficient_u64(const RcPoly *p, size_t k, uint64_t *out);

/**
 * Coefficients as a JSON array of decimal strings.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
RcStatus rc_poly_to_json(const RcPoly *p, char **out);

/**
 * # Safety
 * `p` must be NULL or a handle not yet freed.
 */
void rc_poly_free(RcPoly *p);

/**
 * All d-regular graphs on n vertices up to isomorphism.
 *
 * # Safety
 * `out` must be writable.
 */
RcStatus rc_generate(size_t n, size_t d, bool bipartite_only, RcGraphList **out);

/**
 * Parses graphs separated by `---` lines.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` must be writable.
 */
RcStatus rc_graph_list_parse(const char *text, RcGraphList **out);

/**
 * # Safety
 * `list` must be a live handle.
 */
size_t rc_graph_list_len(const RcGraphList *list);

/**
 * Copies graph `i` into a new handle owned by the caller.
 *
 * # Safety
 * `list` must be a live handle and `out` writable.
 */
RcStatus rc_graph_list_get(const RcGraphList *list, size_t i, RcGraph **out);

/**
 * # Safety
 * `list` must be NULL or a handle not yet freed.
 */
void rc_graph_list_free(RcGraphList *list);

/**
 * Runs a verification command over the (n, d) corpus with default grids.
 * `report` receives the full report when non-NULL; `summary` receives the
 * record and failure counts when non-NULL.
 *
 * # Safety
 * `report` and `summary` must each be NULL or writable.
 */
RcStatus rc_verify(RcCheck check,
                   size_t n,
                   size_t d,
                   RcFormat fmt,
                   char **report,
                   RcSummary *summary);

/**
 * Every bound formula at (n, d). Pass `SIZE_MAX` as `size` for all sizes.
 *
 * # Safety
 * `report` must be writable.
 */
RcStatus rc_bounds_report(size_t n, size_t d, size_t size, RcFormat fmt, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGCOUNT_H */
