#ifndef COMMGRAPH_H
#define COMMGRAPH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CgGraphKind {
  CG_GRAPH_KIND_COMMENSURABILITY = 0,
  CG_GRAPH_KIND_CONTAINMENT = 1,
} CgGraphKind;

/**
 * Status codes; the first five match the command-line exit codes.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_VERDICT_FAIL = 1,
  CG_STATUS_PARSE = 2,
  CG_STATUS_ORDER_CAP = 3,
  CG_STATUS_LATTICE_CAP = 4,
  CG_STATUS_INVALID_ARGUMENT = 5,
  CG_STATUS_NULL_POINTER = 6,
  CG_STATUS_IO = 7,
  CG_STATUS_PANIC = 8,
} CgStatus;

/**
 * A graph on a lattice together with its component analysis.
 */
typedef struct CgGraph CgGraph;

/**
 * A constructed group.
 */
typedef struct CgGroup CgGroup;

/**
 * The complete subgroup lattice of a group.
 */
typedef struct CgLattice CgLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *cg_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cg_string_free(char *s);

/**
 * Builds a group from a spec document such as `{"sym":4}`.
 *
 * # Safety
 * `spec_json` must be a nul-terminated string; `out` must be writable.
 */
enum CgStatus cg_group_new(const char *spec_json, size_t order_cap, struct CgGroup **out);

/**
 * # Safety
 * `g` must be null or a live handle from [`cg_group_new`].
 */
void cg_group_free(struct CgGroup *g);

/**
 * Group order, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live group handle.
 */
size_t cg_group_order(const struct CgGroup *g);

/**
 * Order, factorization, structure flags and derived-series orders as JSON.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum CgStatus cg_group_info_json(const struct CgGroup *g, char **out);

/**
 * Label of element `id`.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum CgStatus cg_group_element_label(const struct CgGroup *g, uint32_t id, char **out);

/**
 * Enumerates every subgroup of `g`.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum CgStatus cg_lattice_new(const struct CgGroup *g, size_t lattice_cap, struct CgLattice **out);

/**
 * Restores a lattice from cache-file text, validating it against `g`.
 *
 * # Safety
 * `g` must be a live group handle; `cache_json` a nul-terminated string;
 * `out` must be writable.
 */
enum CgStatus cg_lattice_from_cache(const struct CgGroup *g,
                                    const char *cache_json,
                                    struct CgLattice **out);

/**
 * # Safety
 * `l` must be null or a live lattice handle.
 */
void cg_lattice_free(struct CgLattice *l);

/**
 * Number of subgroups, or 0 for a null handle.
 *
 * # Safety
 * `l` must be null or a live lattice handle.
 */
size_t cg_lattice_len(const struct CgLattice *l);

/**
 * Order of subgroup `index` in canonical order.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
enum CgStatus cg_lattice_subgroup_order(const struct CgLattice *l, size_t index, size_t *out);

/**
 * The lattice in cache-file form.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
enum CgStatus cg_lattice_cache_json(const struct CgLattice *l, char **out);

/**
 * Builds the p-local graph of the given kind (a [`CgGraphKind`] value) and
 * analyses its components.
 *
 * # Safety
 * `l` must be a live lattice handle; `out` must be writable.
 */
enum CgStatus cg_graph_new(const struct CgLattice *l,
                           uint64_t p,
                           uint32_t kind,
                           struct CgGraph **out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
void cg_graph_free(struct CgGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cg_graph_vertex_count(const struct CgGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cg_graph_edge_count(const struct CgGraph *g);

/**
 * Edge `index` as vertex ids `i < j` with index exponents `a`, `b`.
 *
 * # Safety
 * `g` must be a live graph handle; the out pointers must be writable.
 */
enum CgStatus cg_graph_edge(const struct CgGraph *g,
                            size_t index,
                            size_t *i,
                            size_t *j,
                            uint32_t *a,
                            uint32_t *b);

/**
 * Largest diameter over all components.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cg_graph_connected_diameter(const struct CgGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cg_graph_component_count(const struct CgGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CgStatus cg_graph_dot(const struct CgGraph *g, char **out);

/**
 * Vertices, edges and components as JSON.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CgStatus cg_graph_json(const struct CgGraph *g, char **out);

/**
 * Components with classes and diameters as JSON.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CgStatus cg_graph_analysis_json(const struct CgGraph *g, char **out);

/**
 * Runs a verification suite over the default corpus and returns the report
 * (a JSON array for `all`) without timings. Returns `VerdictFail` with the
 * report still written when any check fails.
 *
 * # Safety
 * `suite` must be a nul-terminated string; `out` must be writable.
 */
enum CgStatus cg_verify(const char *suite, size_t trials, uint64_t seed, char **out);

/**
 * Library version, statically allocated.
 */
const char *cg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMMGRAPH_H */
