#ifndef PERMDIFF_H
#define PERMDIFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  PERMDIFF_STATUS_OK = 0,
  PERMDIFF_STATUS_NULL_POINTER = 1,
  PERMDIFF_STATUS_INVALID_UTF8 = 2,
  PERMDIFF_STATUS_SYNTAX = 3,
  PERMDIFF_STATUS_ALGEBRA = 4,
  PERMDIFF_STATUS_UNSUPPORTED = 5,
  PERMDIFF_STATUS_PANIC = 6,
} PermdiffStatus;

/**
 * Opaque polynomial over the rationals with one derivation.
 */
typedef struct PermdiffPoly PermdiffPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *permdiff_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or came from this library and was not freed before.
 */
void permdiff_string_free(char *s);

/**
 * Evaluates an expression in `x1, x2, ...` to a polynomial.
 *
 * # Safety
 * `text` is a nul-terminated string; `out` is writable.
 */
PermdiffStatus permdiff_poly_parse(const char *text, PermdiffPoly **out);

/**
 * The generator `x_var`.
 *
 * # Safety
 * `out` is writable.
 */
PermdiffStatus permdiff_poly_generator(uint32_t var, PermdiffPoly **out);

/**
 * # Safety
 * `p` is null or a handle not freed before.
 */
void permdiff_poly_free(PermdiffPoly *p);

/**
 * # Safety
 * `a`, `b` are live handles; `out` is writable.
 */
PermdiffStatus permdiff_poly_add(const PermdiffPoly *a, const PermdiffPoly *b, PermdiffPoly **out);

/**
 * # Safety
 * `a`, `b` are live handles; `out` is writable.
 */
PermdiffStatus permdiff_poly_sub(const PermdiffPoly *a, const PermdiffPoly *b, PermdiffPoly **out);

/**
 * # Safety
 * `a`, `b` are live handles; `out` is writable.
 */
PermdiffStatus permdiff_poly_mul(const PermdiffPoly *a, const PermdiffPoly *b, PermdiffPoly **out);

/**
 * One of `prec`, `succ`, `loz`, `bullet`, `diamond`, `circ`.
 *
 * # Safety
 * `tag` is a nul-terminated string; `a`, `b` are live handles; `out` is
 * writable.
 */
PermdiffStatus permdiff_poly_derived_product(const char *tag,
                                             const PermdiffPoly *a,
                                             const PermdiffPoly *b,
                                             PermdiffPoly **out);

/**
 * # Safety
 * `p` is a live handle; `out` is writable.
 */
PermdiffStatus permdiff_poly_derive(const PermdiffPoly *p, PermdiffPoly **out);

/**
 * # Safety
 * `p` is a live handle; `out` is writable.
 */
PermdiffStatus permdiff_poly_star(const PermdiffPoly *p, PermdiffPoly **out);

/**
 * # Safety
 * `p` is a live handle; `out` is writable.
 */
PermdiffStatus permdiff_poly_is_zero(const PermdiffPoly *p, bool *out);

/**
 * # Safety
 * `a`, `b` are live handles; `out` is writable.
 */
PermdiffStatus permdiff_poly_equal(const PermdiffPoly *a, const PermdiffPoly *b, bool *out);

/**
 * Number of monomials with nonzero coefficient.
 *
 * # Safety
 * `p` is a live handle; `out` is writable.
 */
PermdiffStatus permdiff_poly_term_count(const PermdiffPoly *p, size_t *out);

/**
 * Normal form as text; free with [`permdiff_string_free`].
 *
 * # Safety
 * `p` is a live handle; `out` is writable.
 */
PermdiffStatus permdiff_poly_to_string(const PermdiffPoly *p, char **out);

/**
 * Runs a suite (letter, name or `all`); `json` receives the report and
 * `all_expected` whether every verdict matched.
 *
 * # Safety
 * `suite` is a nul-terminated string; `json` and `all_expected` are
 * writable.
 */
PermdiffStatus permdiff_check_suite(const char *suite, char **json, bool *all_expected);

/**
 * Dimension check for `variant` (`star` or `prime`) at degree `n`.
 *
 * # Safety
 * `variant` is a nul-terminated string; `json` and `ok` are writable.
 */
PermdiffStatus permdiff_verify_dimension(size_t n, const char *variant, char **json, bool *ok);

/**
 * Reduction trace and certificate for `p`, as JSON.
 *
 * # Safety
 * `p` is a live handle; `json` is writable.
 */
PermdiffStatus permdiff_reduce(const PermdiffPoly *p, char **json);

/**
 * Brackets of basis pairs with exponents up to `bound`; `kind` is `lie`
 * or `leibniz`, `n` is 1 or 2.
 *
 * # Safety
 * `kind` is a nul-terminated string; `json` is writable.
 */
PermdiffStatus permdiff_structure_table(size_t n, const char *kind, uint32_t bound, char **json);

/**
 * Compares the reference rules with computed brackets.
 *
 * # Safety
 * `json` and `all_ok` are writable.
 */
PermdiffStatus permdiff_verify_tables(char **json, bool *all_ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMDIFF_H */
