#ifndef QLO_H
#define QLO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum QloStatus {
  QloStatus_Ok = 0,
  /**
   * A verdict was produced but it is inconclusive.
   */
  QloStatus_Inconclusive = 1,
  /**
   * Malformed input (JSON, rational syntax, dimensions).
   */
  QloStatus_InvalidInput = 2,
  /**
   * The requested computation exceeds a configured cap.
   */
  QloStatus_CapExceeded = 3,
  /**
   * A stated hypothesis failed mid-computation.
   */
  QloStatus_HypothesisViolated = 4,
  /**
   * Null pointer or UTF-8 failure at the boundary.
   */
  QloStatus_BadPointer = 5,
  /**
   * Internal panic; a bug, not a usage error.
   */
  QloStatus_Internal = 6,
} QloStatus;

/**
 * Opaque parsed rational matrix.
 */
typedef struct QloMatrix QloMatrix;

/**
 * Opaque parsed quadratic polynomial.
 */
typedef struct QloPoly QloPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or null if none. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *qlo_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `ptr` must have been returned by a qlo function and not freed before.
 */
void qlo_string_free(char *ptr);

/**
 * Parses a polynomial from its JSON wire format.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum QloStatus qlo_poly_parse(const char *json, struct QloPoly **out);

/**
 * # Safety
 * `ptr` must come from `qlo_poly_parse` and not be freed twice.
 */
void qlo_poly_free(struct QloPoly *ptr);

/**
 * Parses a matrix from its JSON wire format.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum QloStatus qlo_matrix_parse(const char *json, struct QloMatrix **out);

/**
 * # Safety
 * `ptr` must come from `qlo_matrix_parse` and not be freed twice.
 */
void qlo_matrix_free(struct QloMatrix *ptr);

/**
 * Exact histogram of Q over {-1,1}^n as JSON (sup included), enumeration
 * capped at `cap` variables.
 *
 * # Safety
 * `poly` must be a live handle; `out` a valid pointer.
 */
enum QloStatus qlo_poly_histogram(const struct QloPoly *poly, uintptr_t cap, char **out);

/**
 * Exact Pr[Q = z] (and optionally M xi = w from `constraint_json`).
 *
 * # Safety
 * `poly` must be a live handle; strings NUL-terminated; `out` valid.
 */
enum QloStatus qlo_poly_point_prob(const struct QloPoly *poly,
                                   const char *z,
                                   const char *constraint_json,
                                   uintptr_t cap,
                                   char **out);

/**
 * Halasz-class membership certificate as JSON; Inconclusive surfaces in the
 * status code.
 *
 * # Safety
 * `matrix` must be a live handle; `out` valid.
 */
enum QloStatus qlo_halasz_membership(const struct QloMatrix *matrix,
                                     uintptr_t s,
                                     uint64_t budget,
                                     char **out);

/**
 * Evaluates a named closed-form bound; `params` uses the CLI syntax
 * ("k=2,t=4"). Returns {"name","log2","clamped"} JSON.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` valid.
 */
enum QloStatus qlo_bound_eval(const char *name, const char *params, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLO_H */
