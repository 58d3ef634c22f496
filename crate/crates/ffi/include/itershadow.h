#ifndef ITERSHADOW_H
#define ITERSHADOW_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define ITERSHADOW_OK 0

/**
 * A verification-style failure (a checked inequality did not hold).
 */
#define ITERSHADOW_ERR_VERIFICATION 1

/**
 * Invalid input: bad parameters, null pointers, malformed strings.
 */
#define ITERSHADOW_ERR_INPUT 2

/**
 * A capacity guard refused the computation at this size.
 */
#define ITERSHADOW_ERR_CAPACITY 3

/**
 * Opaque family handle; create with the constructor functions and release
 * with `itershadow_family_free`.
 */
typedef struct ItershadowFamily ItershadowFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create an empty family on layer k of the n-cube.
 */
int itershadow_family_new(uint32_t n, uint32_t k, struct ItershadowFamily **out);

/**
 * Create a named middle-layer family from a spec string (same syntax as
 * the CLI `--family` flag: "dictator", "half-half", "lex:SIZE",
 * "random:P", "weight:E1,..:T", "file:PATH").
 */
int itershadow_family_generate(const char *spec,
                               uint32_t n,
                               uint64_t seed,
                               struct ItershadowFamily **out);

/**
 * Load a family from an LFAM file.
 */
int itershadow_family_load(const char *path, struct ItershadowFamily **out);

/**
 * Write a family to an LFAM file (plus its JSON manifest sidecar).
 */
int itershadow_family_save(const struct ItershadowFamily *family, const char *path);

/**
 * Release a family handle. Null is accepted and ignored.
 */
void itershadow_family_free(struct ItershadowFamily *family);

/**
 * Insert the set given as a bit mask (bit i = element i+1).
 */
int itershadow_family_insert(struct ItershadowFamily *family, uint64_t mask);

/**
 * Membership test for a bit-mask set.
 */
int itershadow_family_contains(const struct ItershadowFamily *family, uint64_t mask, int *out);

/**
 * Number of member sets.
 */
int itershadow_family_count(const struct ItershadowFamily *family, uint64_t *out);

/**
 * Measure of the family within its layer.
 */
int itershadow_family_measure(const struct ItershadowFamily *family, double *out);

/**
 * Measure of the r-iterated upper shadow.
 */
int itershadow_shadow_measure(const struct ItershadowFamily *family, uint32_t r, double *out);

/**
 * Measure of the meet of the r-iterated shadows of the family and its
 * complement.
 */
int itershadow_intersection_measure(const struct ItershadowFamily *family, uint32_t r, double *out);

/**
 * Density of ordered good distance-(2j) pairs.
 */
int itershadow_pair_density(const struct ItershadowFamily *family, uint32_t j, double *out);

/**
 * Normalized-Laplacian spectral gap of J(n, n/2, j); `verdict` is 1 when
 * the gap is at least j/(2n), 0 when it is not, and -1 when j/n > 1/10 so
 * the gap theorem's hypothesis fails.
 */
int itershadow_spectral_gap(uint32_t n, uint32_t j, double *out_gap, int *out_verdict);

/**
 * Explicit-bound calculator; writes the derived shadow depth r, subcube
 * dimension D and the closed-form lower bound.
 */
int itershadow_bound_calc(uint32_t n,
                          double epsilon,
                          double mu,
                          uint32_t *out_r,
                          uint32_t *out_d,
                          double *out_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ITERSHADOW_H */
