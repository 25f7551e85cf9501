#ifndef COARSE_GEOM_H
#define COARSE_GEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_INVALID_INPUT = 1,
  CG_STATUS_RESOURCE_CAP = 2,
  CG_STATUS_CERTIFICATE_UNAVAILABLE = 3,
  CG_STATUS_CERTIFICATE_INVALID = 4,
  CG_STATUS_MOVE_REJECTED = 5,
  CG_STATUS_NULL_POINTER = 6,
  CG_STATUS_INTERNAL = 7,
} CgStatus;

/**
 * Outcome of a loop contraction.
 */
typedef enum CgContraction {
  CG_CONTRACTION_CONTRACTED = 0,
  CG_CONTRACTION_IMPOSSIBLE = 1,
  CG_CONTRACTION_INCONCLUSIVE = 2,
} CgContraction;

/**
 * Opaque finite metric space.
 */
typedef struct CgSpace CgSpace;

/**
 * Exact rational `num / den`; `den` must be positive.
 */
typedef struct CgRational {
  int64_t num;
  int64_t den;
} CgRational;

typedef struct CgQiConstants {
  struct CgRational a;
  struct CgRational b;
  struct CgRational alpha;
  struct CgRational beta;
  struct CgRational c;
  struct CgRational gamma;
} CgQiConstants;

typedef struct CgTransfer {
  struct CgRational r_prime;
  struct CgRational rho_prime;
  /**
   * Scale of the pushed-forward loop, `A·rho + B`.
   */
  struct CgRational pushed_scale;
} CgTransfer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next call on this thread.
 */
const char *cg_last_error(void);

/**
 * Library version as a static string.
 */
const char *cg_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cg_string_free(char *s);

/**
 * Circle of circumference `circumference` with `points` equally spaced
 * points, labelled `p0, p1, …`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CgStatus cg_space_circle(struct CgRational circumference, size_t points, struct CgSpace **out);

/**
 * Word-metric ball of `radius` in a group family given in the command-line
 * form (`free-abelian:2`, `free:2`, `heisenberg`, `cyclic:5`, …), with its
 * standard generators, or `gens` (same syntax as `--gens`) when not null.
 *
 * # Safety
 * `family` must be a nul-terminated string, `gens` null or one, and `out`
 * a valid pointer.
 */
enum CgStatus cg_space_window(const char *family,
                              const char *gens,
                              size_t radius,
                              struct CgSpace **out);

/**
 * Space from its JSON form (`labels`, `distances`, `basepoint`).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CgStatus cg_space_from_json(const char *json, struct CgSpace **out);

/**
 * JSON form of a space; free with [`cg_string_free`].
 *
 * # Safety
 * `space` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_space_to_json(const struct CgSpace *space, char **out);

/**
 * Releases a space. Null is ignored.
 *
 * # Safety
 * `space` must come from a `cg_space_*` constructor and not have been freed.
 */
void cg_space_free(struct CgSpace *space);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t cg_space_len(const struct CgSpace *space);

/**
 * # Safety
 * `space` must be a live handle, `label` a nul-terminated string and `out`
 * a valid pointer.
 */
enum CgStatus cg_space_index_of(const struct CgSpace *space, const char *label, size_t *out);

/**
 * # Safety
 * `space` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_space_distance(const struct CgSpace *space,
                                size_t i,
                                size_t j,
                                struct CgRational *out);

/**
 * Edge and triangle counts of the Rips 2-complex at `scale`.
 *
 * # Safety
 * `space` must be a live handle and the outputs valid pointers.
 */
enum CgStatus cg_rips_counts(const struct CgSpace *space,
                             struct CgRational scale,
                             size_t *edges,
                             size_t *triangles);

/**
 * Contracts the loop `points[0..len]` at `scale` with a budget of
 * `max_nodes` search nodes (0 for the default). When `json_out` is not
 * null it receives the outcome with its moves or certificate; free it with
 * [`cg_string_free`].
 *
 * # Safety
 * `space` must be a live handle, `points` valid for `len` reads, `outcome`
 * a valid pointer and `json_out` null or valid.
 */
enum CgStatus cg_contract_loop(const struct CgSpace *space,
                               const size_t *points,
                               size_t len,
                               struct CgRational scale,
                               uint64_t max_nodes,
                               enum CgContraction *outcome,
                               char **json_out);

/**
 * Winding number of a loop at scale `scale` through the space's first
 * circle chart. Fails with `CERTIFICATE_UNAVAILABLE` when there is no chart
 * or its circumference is at most `3·scale`.
 *
 * # Safety
 * `space` must be a live handle, `points` valid for `len` reads and `out`
 * a valid pointer.
 */
enum CgStatus cg_winding(const struct CgSpace *space,
                         const size_t *points,
                         size_t len,
                         struct CgRational scale,
                         int64_t *out);

/**
 * Transferred scales `r' = max(C, αr + β)` and `ρ' = C + max(αR + β, ρ)`.
 *
 * # Safety
 * `constants` and `out` must be valid pointers.
 */
enum CgStatus cg_qi_transfer(const struct CgQiConstants *constants,
                             struct CgRational r,
                             struct CgRational big_r,
                             struct CgRational rho,
                             struct CgTransfer *out);

/**
 * Whether relations of ℓ1-length at most `ell` among `1!, …, m!` fail to
 * generate all relations. `json_out`, when not null, receives the
 * certificate; free it with [`cg_string_free`].
 *
 * # Safety
 * `has_obstruction` must be a valid pointer and `json_out` null or valid.
 */
enum CgStatus cg_factorial_certificate(size_t m,
                                       size_t ell,
                                       bool *has_obstruction,
                                       char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COARSE_GEOM_H */
