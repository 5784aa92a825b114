#ifndef CTQW_H
#define CTQW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtqwGenerator {
  /**
   * exp(-iAt)
   */
  CTQW_GENERATOR_ADJACENCY = 0,
  /**
   * exp(+iLt)
   */
  CTQW_GENERATOR_LAPLACIAN = 1,
} CtqwGenerator;

typedef enum CtqwStatus {
  CTQW_STATUS_OK = 0,
  CTQW_STATUS_NULL_POINTER = 1,
  CTQW_STATUS_INVALID_ARGUMENT = 2,
  CTQW_STATUS_INVALID_GRAPH = 3,
  CTQW_STATUS_IO = 4,
  CTQW_STATUS_PARSE = 5,
  CTQW_STATUS_NUMERICAL = 6,
  CTQW_STATUS_BUFFER_TOO_SMALL = 7,
  CTQW_STATUS_PANIC = 8,
} CtqwStatus;

/**
 * Opaque graph handle.
 */
typedef struct CtqwGraph CtqwGraph;

/**
 * Opaque edge-removal sweep handle.
 */
typedef struct CtqwSweep CtqwSweep;

/**
 * Walk parameters. `initial_node` is a 1-based node for a localized
 * start, or 0 for the uniform superposition.
 */
typedef struct CtqwWalkConfig {
  enum CtqwGenerator generator;
  double total_time;
  double dt;
  size_t initial_node;
} CtqwWalkConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ctqw_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library from the
 * same thread.
 */
const char *ctqw_last_error(void);

/**
 * Adjacency walk from the uniform state, T = 100π, dt = T/1000.
 */
struct CtqwWalkConfig ctqw_walk_config_default(void);

/**
 * Builds a graph from `n_pairs` 1-based pairs stored as
 * `pairs[2k], pairs[2k+1]`. `n_nodes == 0` infers the node count from the
 * largest label.
 *
 * # Safety
 * `pairs` must point to `2 * n_pairs` readable values (it may be null when
 * `n_pairs == 0`); `out` must be a valid pointer to a handle slot.
 */
enum CtqwStatus ctqw_graph_from_edges(const size_t *pairs,
                                      size_t n_pairs,
                                      size_t n_nodes,
                                      struct CtqwGraph **out);

/**
 * Zachary's karate club (34 nodes, 78 edges).
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum CtqwStatus ctqw_graph_karate(struct CtqwGraph **out);

/**
 * Faction of each karate-club member: 0 with node 1, 1 with node 34.
 *
 * # Safety
 * `labels` must point to `len` writable values.
 */
enum CtqwStatus ctqw_karate_labels(size_t *labels, size_t len);

/**
 * Loads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a valid handle slot.
 */
enum CtqwStatus ctqw_graph_load(const char *path, struct CtqwGraph **out);

/**
 * Planted-partition graph; community ids are written to `labels` when it
 * is non-null (`communities * size` values).
 *
 * # Safety
 * `out` must be a valid handle slot; `labels`, if non-null, must point to
 * `labels_len` writable values. `connected`, if non-null, receives whether
 * the returned draw is connected.
 */
enum CtqwStatus ctqw_graph_planted_partition(size_t communities,
                                             size_t size,
                                             double p_in,
                                             double p_out,
                                             uint64_t seed,
                                             size_t *labels,
                                             size_t labels_len,
                                             bool *connected,
                                             struct CtqwGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library not yet freed.
 */
void ctqw_graph_free(struct CtqwGraph *graph);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t ctqw_graph_node_count(const struct CtqwGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t ctqw_graph_edge_count(const struct CtqwGraph *graph);

/**
 * Endpoints of 1-based edge `k`.
 *
 * # Safety
 * `graph` must be a live handle; `u` and `v` valid writable pointers.
 */
enum CtqwStatus ctqw_graph_edge(const struct CtqwGraph *graph, size_t k, size_t *u, size_t *v);

/**
 * New graph without 1-based edge `k`; the input handle is unchanged.
 *
 * # Safety
 * `graph` must be a live handle; `out` a valid handle slot.
 */
enum CtqwStatus ctqw_graph_remove_edge(const struct CtqwGraph *graph,
                                       size_t k,
                                       struct CtqwGraph **out);

/**
 * # Safety
 * `graph` must be a live handle; `connected` a valid writable pointer.
 */
enum CtqwStatus ctqw_graph_is_connected(const struct CtqwGraph *graph, bool *connected);

/**
 * Time-averaged populations (trapezoid over `0, dt, …, T`) into `out`
 * (`node_count` values).
 *
 * # Safety
 * `graph` and `config` must be valid; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_average_populations(const struct CtqwGraph *graph,
                                         const struct CtqwWalkConfig *config,
                                         double *out,
                                         size_t len);

/**
 * Infinite-time populations from the spectrum, with degenerate levels
 * grouped.
 *
 * # Safety
 * `graph` must be a live handle; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_exact_time_average(const struct CtqwGraph *graph,
                                        enum CtqwGenerator generator_kind,
                                        size_t initial_node,
                                        double *out,
                                        size_t len);

/**
 * Degree centralities and populations into two `node_count` buffers.
 * `rho` receives the Spearman rank correlation, or NaN when undefined.
 *
 * # Safety
 * `graph`, `config` and `rho` must be valid; buffers must hold `len` values.
 */
enum CtqwStatus ctqw_centrality_report(const struct CtqwGraph *graph,
                                       const struct CtqwWalkConfig *config,
                                       double *centrality,
                                       double *population,
                                       size_t len,
                                       double *rho);

/**
 * Runs the single-edge-removal sweep on `jobs` workers (0 uses the
 * default pool). Results do not depend on `jobs`.
 *
 * # Safety
 * `graph` and `config` must be valid; `out` a valid handle slot.
 */
enum CtqwStatus ctqw_sweep_run(const struct CtqwGraph *graph,
                               const struct CtqwWalkConfig *config,
                               size_t jobs,
                               struct CtqwSweep **out);

/**
 * # Safety
 * `sweep` must be null or a handle from this library not yet freed.
 */
void ctqw_sweep_free(struct CtqwSweep *sweep);

/**
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t ctqw_sweep_node_count(const struct CtqwSweep *sweep);

/**
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t ctqw_sweep_edge_count(const struct CtqwSweep *sweep);

/**
 * Baseline populations (`node_count` values).
 *
 * # Safety
 * `sweep` must be a live handle; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_sweep_baseline(const struct CtqwSweep *sweep, double *out, size_t len);

/**
 * Population changes, row-major `edge_count × node_count`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_sweep_deltas(const struct CtqwSweep *sweep, double *out, size_t len);

/**
 * Flow signs (+1 / −1), row-major `edge_count × node_count`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_sweep_flow_signs(const struct CtqwSweep *sweep, int8_t *out, size_t len);

/**
 * Node affinity, row-major `node_count × node_count`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must hold `len` values.
 */
enum CtqwStatus ctqw_sweep_affinity(const struct CtqwSweep *sweep, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTQW_H */
