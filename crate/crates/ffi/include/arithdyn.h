#ifndef ARITHDYN_H
#define ARITHDYN_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AdStatus {
  AD_STATUS_OK = 0,
  AD_STATUS_NULL_POINTER = 1,
  AD_STATUS_INVALID_UTF8 = 2,
  AD_STATUS_INVALID_ARGUMENT = 3,
  AD_STATUS_INVALID_FUNCTION = 4,
  AD_STATUS_VALUE_TOO_LARGE = 5,
  AD_STATUS_BUDGET = 6,
  AD_STATUS_NOT_SUPPORTED = 7,
  AD_STATUS_UNDECIDABLE = 8,
  AD_STATUS_PANIC = 99,
} AdStatus;

/**
 * Opaque handle to a natural number in factored form.
 */
typedef struct AdNatural AdNatural;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call
 * into this library from the same thread.
 */
const char *ad_last_error(void);

/**
 * `n >= 1` as a new handle.
 */
enum AdStatus ad_natural_from_u64(uint64_t n, struct AdNatural **out);

/**
 * Parses a decimal integer or a factored form such as `2^11*3`.
 */
enum AdStatus ad_natural_parse(const char *text, struct AdNatural **out);

void ad_natural_free(struct AdNatural *n);

/**
 * Factored form, e.g. `2^11*3`. Free with [`ad_string_free`].
 */
enum AdStatus ad_natural_to_string(const struct AdNatural *n, char **out);

/**
 * `AD_STATUS_VALUE_TOO_LARGE` when the value does not fit in 64 bits.
 */
enum AdStatus ad_natural_to_u64(const struct AdNatural *n, uint64_t *out);

void ad_string_free(char *s);

/**
 * `f(n)` for a function id such as `phi`, `J2`, `sigma1` or `Omega`.
 */
enum AdStatus ad_eval(const char *function, const struct AdNatural *n, struct AdNatural **out);

/**
 * `phi^-1(m)` in ascending order. Free with [`ad_u64_array_free`].
 */
enum AdStatus ad_inverse_phi(uint64_t m, uint64_t **out, size_t *out_len);

void ad_u64_array_free(uint64_t *p, size_t len);

/**
 * Term `n >= 1` of family `index` of a scheme such as `PHI_ANTI`.
 */
enum AdStatus ad_family_term(const char *scheme,
                             uint64_t index,
                             uint64_t n,
                             struct AdNatural **out);

/**
 * Runs a named check and writes its JSON report. Zero `families`, `depth`
 * or `bound` selects the check's default. A failing check still returns
 * `AD_STATUS_OK`; its outcome is the report's `status`. Free with
 * [`ad_string_free`].
 */
enum AdStatus ad_verify_lemma(const char *id,
                              uint64_t families,
                              uint64_t depth,
                              uint64_t bound,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARITHDYN_H */
