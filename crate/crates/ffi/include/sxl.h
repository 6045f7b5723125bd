#ifndef SXL_H
#define SXL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum SxlStatus {
  SXL_STATUS_OK = 0,
  SXL_STATUS_NULL_POINTER = 1,
  SXL_STATUS_INVALID_UTF8 = 2,
  SXL_STATUS_BUFFER_TOO_SMALL = 3,
  SXL_STATUS_VERTEX_LIMIT_EXCEEDED = 10,
  SXL_STATUS_INVALID_EDGE = 11,
  SXL_STATUS_INVALID_PARAMETER = 12,
  SXL_STATUS_DIVISIBILITY = 13,
  SXL_STATUS_CONVERGENCE_FAILURE = 14,
  SXL_STATUS_INVALID_PATTERN = 15,
  SXL_STATUS_SIZE_LIMIT_EXCEEDED = 16,
  SXL_STATUS_MALFORMED_GRAPH6 = 17,
  SXL_STATUS_SIZE_UNSUPPORTED = 18,
  SXL_STATUS_INVALID_WEIGHTS = 19,
  SXL_STATUS_INVALID_ROTATION = 20,
  SXL_STATUS_PARSE = 21,
  SXL_STATUS_BOUND_VIOLATION = 22,
  SXL_STATUS_PANIC = 99,
} SxlStatus;

// Opaque graph handle.
typedef struct SxlGraph SxlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer stays valid until
// the next failing call on the same thread.
const char *sxl_last_error_message(void);

// Builds a graph on `n` vertices from `edge_count` pairs stored flat in `edges`
// (`u0, v0, u1, v1, ...`).
//
// # Safety
// `edges` must point to `2 * edge_count` readable values (it may be null when `edge_count` is
// 0) and `out` must be writable.
enum SxlStatus sxl_graph_from_edges(size_t n,
                                    const size_t *edges,
                                    size_t edge_count,
                                    struct SxlGraph **out);

// Parses one graph6 line.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum SxlStatus sxl_graph_from_graph6(const char *text, struct SxlGraph **out);

// Builds a named family member such as `"K4"`, `"W6"` or `"ext{k=3,m=12}"`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` writable.
enum SxlStatus sxl_graph_from_family(const char *spec, struct SxlGraph **out);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must come from this library and not be used afterwards.
void sxl_graph_free(struct SxlGraph *g);

// Vertex count, or 0 for null.
//
// # Safety
// `g` must be null or a live handle.
size_t sxl_graph_vertex_count(const struct SxlGraph *g);

// Edge count, or 0 for null.
//
// # Safety
// `g` must be null or a live handle.
size_t sxl_graph_edge_count(const struct SxlGraph *g);

// Largest adjacency eigenvalue.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum SxlStatus sxl_spectral_radius(const struct SxlGraph *g, double *out);

// Writes the Perron vector (max entry 1) into `buf`, which must hold at least as many
// entries as the graph has vertices.
//
// # Safety
// `g` must be a live handle and `buf` must point to `len` writable doubles.
enum SxlStatus sxl_perron_vector(const struct SxlGraph *g, double *buf, size_t len);

// Sets `*out` to whether `g` contains `pattern` (a family spec or a graph6 string) as a
// subgraph.
//
// # Safety
// `g` must be a live handle, `pattern` NUL-terminated and `out` writable.
enum SxlStatus sxl_contains(const struct SxlGraph *g, const char *pattern, bool *out);

// graph6 encoding of `g` as labeled. Release with [`sxl_string_free`].
//
// # Safety
// `g` must be a live handle and `out` writable.
enum SxlStatus sxl_graph_to_graph6(const struct SxlGraph *g, char **out);

// graph6 encoding of the canonical relabeling of `g`; equal strings mean isomorphic graphs.
// Release with [`sxl_string_free`].
//
// # Safety
// `g` must be a live handle and `out` writable.
enum SxlStatus sxl_graph_canonical_graph6(const struct SxlGraph *g, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void sxl_string_free(char *s);

// Evaluates a bound such as `"zls"`, `"nikiforov:3"` or `"fk:4"` at edge count `m`.
//
// # Safety
// `kind` must be NUL-terminated and `out` writable.
enum SxlStatus sxl_bound_value(const char *kind, size_t m, double *out);

// Number of isomorphism classes of graphs with `m` edges, connected ones only when
// `connected` is set.
//
// # Safety
// `out` must be writable.
enum SxlStatus sxl_count_graphs(size_t m, bool connected, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SXL_H */
