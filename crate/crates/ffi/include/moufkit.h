#ifndef MOUFKIT_H
#define MOUFKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MkStatus {
  MK_STATUS_OK = 0,
  MK_STATUS_NULL_ARGUMENT = 1,
  MK_STATUS_INVALID_UTF8 = 2,
  MK_STATUS_PARSE = 3,
  MK_STATUS_INVALID_LOOP = 4,
  /**
   * The inputs were well formed but the operation does not apply.
   */
  MK_STATUS_DOMAIN = 5,
  MK_STATUS_CAP_EXCEEDED = 6,
  /**
   * `out_len` holds the required length.
   */
  MK_STATUS_BUFFER_TOO_SMALL = 7,
  MK_STATUS_PANIC = 8,
} MkStatus;

/**
 * Opaque loop handle.
 */
typedef struct MkLoop MkLoop;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *mk_last_error(void);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void mk_string_free(char *s);

/**
 * Builds a loop from a row-major `order × order` table whose element 0 is
 * the identity.
 *
 * # Safety
 * `entries` points to `order * order` readable values; `out` is writable.
 */
enum MkStatus mk_loop_from_table(const size_t *entries, size_t order, struct MkLoop **out);

/**
 * Parses `.loop` text.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is writable.
 */
enum MkStatus mk_loop_parse(const char *text, struct MkLoop **out);

/**
 * Builds a named fixture such as `"cyclic:7"` or `"paige-M2"`.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is writable.
 */
enum MkStatus mk_loop_fixture(const char *name, struct MkLoop **out);

/**
 * # Safety
 * `q` is NULL or a handle from this library that has not been freed.
 */
void mk_loop_free(struct MkLoop *q);

/**
 * Order of the loop, or 0 for a NULL handle.
 *
 * # Safety
 * `q` is NULL or a live handle.
 */
size_t mk_loop_order(const struct MkLoop *q);

/**
 * # Safety
 * `q` is a live handle; `out` is writable.
 */
enum MkStatus mk_loop_mul(const struct MkLoop *q, size_t a, size_t b, size_t *out);

/**
 * Checks an identity scheme by name, e.g. `"moufang-1"` or `"extra"`. When
 * it fails and `witness` is non-NULL, up to `witness_cap` witness elements
 * are written and `witness_len` receives the witness length.
 *
 * # Safety
 * `q` is a live handle; `scheme` is NUL-terminated; `holds` is writable;
 * `witness` is NULL or has room for `witness_cap` values; `witness_len` is
 * NULL or writable.
 */
enum MkStatus mk_loop_satisfies_identity(const struct MkLoop *q,
                                         const char *scheme,
                                         bool *holds,
                                         size_t *witness,
                                         size_t witness_cap,
                                         size_t *witness_len);

/**
 * `.loop` text for the loop.
 *
 * # Safety
 * `q` is a live handle; `out` is writable.
 */
enum MkStatus mk_loop_serialize(const struct MkLoop *q, char **out);

/**
 * The JSON analysis report. Zero caps select the defaults.
 *
 * # Safety
 * `q` is a live handle; `source` is NULL or NUL-terminated; `out` is
 * writable.
 */
enum MkStatus mk_loop_analyze_json(const struct MkLoop *q,
                                   const char *source,
                                   size_t max_order,
                                   size_t max_inn,
                                   size_t max_normal_lattice,
                                   char **out);

/**
 * `[X, Y]` for the normal closures of the two element sets, written sorted
 * into `out`. `out_len` always receives the commutator's size; if it exceeds
 * `out_cap` nothing is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `q` is a live handle; `x`, `y` point to `x_len`, `y_len` values; `out` has
 * room for `out_cap` values; `out_len` is writable.
 */
enum MkStatus mk_commutator(const struct MkLoop *q,
                            const size_t *x,
                            size_t x_len,
                            const size_t *y,
                            size_t y_len,
                            size_t *out,
                            size_t out_cap,
                            size_t *out_len);

/**
 * Congruence solvability; `max_order` 0 selects the default cap.
 *
 * # Safety
 * `q` is a live handle; `solvable` is writable.
 */
enum MkStatus mk_congruence_solvable(const struct MkLoop *q, size_t max_order, bool *solvable);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOUFKIT_H */
