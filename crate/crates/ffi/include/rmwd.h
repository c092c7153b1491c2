#ifndef RMWD_H
#define RMWD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RmwdStatus {
  RMWD_STATUS_OK = 0,
  RMWD_STATUS_NULL_POINTER = 1,
  RMWD_STATUS_INVALID_ARGUMENT = 2,
  RMWD_STATUS_PARSE = 3,
  RMWD_STATUS_CAP_EXCEEDED = 4,
  RMWD_STATUS_NOT_FOUND = 5,
  RMWD_STATUS_OUT_OF_RANGE = 6,
  RMWD_STATUS_OVERFLOW = 7,
  RMWD_STATUS_IO = 8,
  RMWD_STATUS_INTERNAL = 9,
} RmwdStatus;

typedef enum RmwdStrategy {
  RMWD_STRATEGY_DIRECT = 0,
  RMWD_STRATEGY_BLOCKS = 1,
} RmwdStrategy;

/**
 * Opaque weight enumerator.
 */
typedef struct RmwdEnumerator RmwdEnumerator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *rmwd_last_error(void);

/**
 * Weight distribution of R(r,m) by enumerating every codeword.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum RmwdStatus rmwd_brute_force(size_t r, size_t m, struct RmwdEnumerator **out);

/**
 * Weight distribution of the coset `anf + R(r,m)`.
 *
 * # Safety
 * `anf` must be a nul-terminated string; `out` must be valid for writing.
 */
enum RmwdStatus rmwd_coset_enumerator(const char *anf,
                                      size_t r,
                                      size_t m,
                                      struct RmwdEnumerator **out);

/**
 * W[R(r,m)] through the class-weighted recursion, classifying H^(r)(m-1)
 * internally. `jobs = 0` uses the default worker count.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum RmwdStatus rmwd_pipeline(size_t r,
                              size_t m,
                              enum RmwdStrategy strategy,
                              uint64_t seed,
                              size_t jobs,
                              struct RmwdEnumerator **out);

/**
 * Parses a two- or three-column distribution for a code of length `n`.
 *
 * # Safety
 * `text` must be nul-terminated; `out` must be valid for writing.
 */
enum RmwdStatus rmwd_enumerator_from_text(const char *text, size_t n, struct RmwdEnumerator **out);

/**
 * # Safety
 * `e` must be null or a handle from this library not yet freed.
 */
void rmwd_enumerator_free(struct RmwdEnumerator *e);

/**
 * Number of coefficients, `n + 1`.
 *
 * # Safety
 * `e` must be a live handle; `len` must be valid for writing.
 */
enum RmwdStatus rmwd_enumerator_length(const struct RmwdEnumerator *e, size_t *len);

/**
 * Coefficient `i` as `u64`; `RMWD_STATUS_OVERFLOW` if it does not fit.
 *
 * # Safety
 * `e` must be a live handle; `value` must be valid for writing.
 */
enum RmwdStatus rmwd_enumerator_coefficient_u64(const struct RmwdEnumerator *e,
                                                size_t i,
                                                uint64_t *value);

/**
 * Coefficient `i` in decimal, or null on error. Free with [`rmwd_string_free`].
 *
 * # Safety
 * `e` must be a live handle.
 */
char *rmwd_enumerator_coefficient_string(const struct RmwdEnumerator *e, size_t i);

/**
 * The enumerator as "weight count" lines, optionally folded into
 * "weight n-weight count" pairs. Free with [`rmwd_string_free`].
 *
 * # Safety
 * `e` must be a live handle.
 */
char *rmwd_enumerator_to_text(const struct RmwdEnumerator *e, bool folded);

/**
 * Coefficient-exact equality.
 *
 * # Safety
 * `a` and `b` must be live handles; `equal` must be valid for writing.
 */
enum RmwdStatus rmwd_enumerator_equal(const struct RmwdEnumerator *a,
                                      const struct RmwdEnumerator *b,
                                      bool *equal);

/**
 * Number of minimum-weight codewords of R(r,m) in decimal, or null.
 */
char *rmwd_min_weight_count(size_t r, size_t m);

/**
 * Checks a distribution text against every identity R(r,m) satisfies.
 * `passed` receives the verdict; a returned error means the text could not
 * be checked at all.
 *
 * # Safety
 * `text` must be nul-terminated; `passed` must be valid for writing.
 */
enum RmwdStatus rmwd_verify_distribution(const char *text, size_t r, size_t m, bool *passed);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void rmwd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RMWD_H */
