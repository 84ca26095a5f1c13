#ifndef DIVIDED_POWERS_H
#define DIVIDED_POWERS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this interface.
 */
typedef enum DpStatus {
  DpOk = 0,
  DpNullPointer = 1,
  DpInvalidUtf8 = 2,
  DpParseError = 3,
  DpDomainError = 4,
  DpInternalError = 5,
} DpStatus;

/**
 * An element of the degree-n divided-powers algebra (opaque).
 */
typedef struct DpElem DpElem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread, or NULL when none was
 * recorded. The caller owns the returned string.
 */
char *dp_last_error_message(void);

/**
 * Parses an element written in the D(n; ...) grammar over m letters.
 *
 * # Safety
 * `src` must be a valid NUL-terminated string; `out` must be valid.
 */
enum DpStatus dp_elem_parse(const char *src, uintptr_t n, uint8_t m, struct DpElem **out);

/**
 * Parses a free-algebra element ("x1 + 2*x2 - 1") and takes its n-th
 * divided power.
 *
 * # Safety
 * `src` must be a valid NUL-terminated string; `out` must be valid.
 */
enum DpStatus dp_power(const char *src, uintptr_t n, uint8_t m, struct DpElem **out);

/**
 * Star product of two elements of the same degree.
 *
 * # Safety
 * `lhs` and `rhs` must be live handles; `out` must be valid.
 */
enum DpStatus dp_elem_mul(const struct DpElem *lhs, const struct DpElem *rhs, struct DpElem **out);

/**
 * Sum of two elements of the same degree.
 *
 * # Safety
 * `lhs` and `rhs` must be live handles; `out` must be valid.
 */
enum DpStatus dp_elem_add(const struct DpElem *lhs, const struct DpElem *rhs, struct DpElem **out);

/**
 * Canonical text of an element; round-trips through `dp_elem_parse`.
 * Returns NULL on a null handle.
 *
 * # Safety
 * `elem` must be a live handle or NULL.
 */
char *dp_elem_render(const struct DpElem *elem);

/**
 * Stable JSON form of an element. Returns NULL on a null handle.
 *
 * # Safety
 * `elem` must be a live handle or NULL.
 */
char *dp_elem_render_json(const struct DpElem *elem);

/**
 * Norm of an element over an m-letter alphabet, printed as a polynomial
 * in the generic-matrix entries.
 *
 * # Safety
 * `elem` must be a live handle; `out` must be valid.
 */
enum DpStatus dp_norm_render(const struct DpElem *elem, uint8_t m, char **out);

/**
 * Generator decomposition of an element, optionally reduced to primitive
 * words and abelianized, printed in the E(i; w) syntax.
 *
 * # Safety
 * `elem` must be a live handle; `out` must be valid.
 */
enum DpStatus dp_decompose_render(const struct DpElem *elem,
                                  bool primitive,
                                  bool abelianize,
                                  char **out);

/**
 * Primitive necklaces of degree 1..=max_degree over m letters, one per
 * line. Returns NULL on invalid parameters.
 */
char *dp_necklaces(uint8_t m, uintptr_t max_degree);

/**
 * Evaluates the Hilbert-Chow map on a representation point given as the
 * JSON document {"n":..,"m":..,"matrices":[[[..]]],"v":[..]} and writes
 * the coordinate JSON. A zero cutoff selects the default n^2.
 *
 * # Safety
 * `input` must be a valid NUL-terminated string; `out` must be valid.
 */
enum DpStatus dp_hc_eval_json(const char *input, uintptr_t max_degree, char **out);

/**
 * Releases an element handle. NULL is ignored.
 *
 * # Safety
 * `elem` must be a handle returned by this library, released once.
 */
void dp_elem_free(struct DpElem *elem);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be a string returned by this library, released once.
 */
void dp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIVIDED_POWERS_H */
