#ifndef ORDSUM_H
#define ORDSUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. `ORDSUM_STATUS_OK` is zero.
typedef enum OrdsumStatus {
  ORDSUM_STATUS_OK = 0,
  ORDSUM_STATUS_NULL_POINTER = 1,
  ORDSUM_STATUS_INVALID_UTF8 = 2,
  ORDSUM_STATUS_DOMAIN = 3,
  ORDSUM_STATUS_RANGE = 4,
  ORDSUM_STATUS_WORK_BUDGET = 5,
  ORDSUM_STATUS_UNCERTIFIED = 6,
  ORDSUM_STATUS_PRECISION_EXHAUSTED = 7,
  ORDSUM_STATUS_INTEGRALITY = 8,
  ORDSUM_STATUS_INTERNAL = 9,
  ORDSUM_STATUS_PANIC = 10,
} OrdsumStatus;

// Outcome of a certified comparison.
typedef enum OrdsumVerdict {
  ORDSUM_VERDICT_HOLDS = 0,
  ORDSUM_VERDICT_FAILS = 1,
  ORDSUM_VERDICT_UNDECIDED = 2,
} OrdsumVerdict;

// Opaque handle to a real quadratic field `Q(√d)`.
typedef struct OrdsumField OrdsumField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next `ordsum_*` call on the same thread.
const char *ordsum_last_error(void);

// Library version as a static string.
const char *ordsum_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ordsum_string_free(char *s);

// `G_a(x)` as `"p/q"`.
//
// # Safety
// `out` must be a valid pointer.
enum OrdsumStatus ordsum_g_direct(uint64_t a, uint64_t x, char **out);

// The decomposition report of `G_a(x)` as JSON. `beta` may be NULL for the
// default `(alpha - 1)/2`; `alpha` and `beta` are rationals like `"3/2"`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be valid.
enum OrdsumStatus ordsum_decompose_json(uint64_t a,
                                        uint64_t x,
                                        const char *alpha,
                                        const char *beta,
                                        char **out);

// Builds `Q(√d)` for squarefree `d >= 2`.
//
// # Safety
// `out` must be valid; release the handle with [`ordsum_field_free`].
enum OrdsumStatus ordsum_field_new(uint64_t d, struct OrdsumField **out);

// # Safety
// `field` must come from [`ordsum_field_new`] and not have been freed.
void ordsum_field_free(struct OrdsumField *field);

// Discriminant of the field.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_field_disc(const struct OrdsumField *field, uint64_t *out);

// Fundamental unit `u + vω` as decimal strings, and its norm.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_field_unit(const struct OrdsumField *field,
                                    char **u,
                                    char **v,
                                    int8_t *norm);

// `h` and `h^+`.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_class_number(const struct OrdsumField *field,
                                      uint64_t *h,
                                      uint64_t *h_plus);

// `P_K(x)` as `"p/q"`.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_pk_direct(const struct OrdsumField *field, uint64_t x, char **out);

// The decomposition report of `P_K(x)` as JSON; `beta` may be NULL.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum OrdsumStatus ordsum_pk_decompose_json(const struct OrdsumField *field,
                                           uint64_t x,
                                           const char *alpha,
                                           const char *beta,
                                           char **out);

// `Σ_{N I <= x} h^nar(I)`; pass `h = 0` to compute the class number.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_hnar_sum(const struct OrdsumField *field,
                                  uint64_t x,
                                  uint64_t h,
                                  uint64_t *out);

// Primitive ray class characters of conductor norm `<= x`; `h = 0`
// computes the class number.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_delta_quadratic(const struct OrdsumField *field,
                                         uint64_t x,
                                         uint64_t h,
                                         uint64_t *out);

// Primitive Dirichlet characters of conductor `<= x`.
//
// # Safety
// `out` must be valid.
enum OrdsumStatus ordsum_delta_rationals(uint64_t x, uint64_t *out);

// `j_K(x) = Σ_{N I <= x} ω(I)^2`.
//
// # Safety
// Pointers must be valid.
enum OrdsumStatus ordsum_jk_sum(const struct OrdsumField *field, uint64_t x, uint64_t *out);

// Certified entropy bound for rationals `x`, `y` given as strings.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum OrdsumStatus ordsum_check_lemma1(const char *x,
                                      const char *y,
                                      uint32_t precision_bits,
                                      enum OrdsumVerdict *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDSUM_H */
