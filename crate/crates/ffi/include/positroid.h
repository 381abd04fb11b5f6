#ifndef POSITROID_H
#define POSITROID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum PositroidStatus {
  POSITROID_STATUS_OK = 0,
  POSITROID_STATUS_NULL_POINTER = 1,
  POSITROID_STATUS_INVALID_ARGUMENT = 2,
  POSITROID_STATUS_RETRIEVAL_FAILED = 3,
  POSITROID_STATUS_NOT_VALIDATED = 4,
  POSITROID_STATUS_BUFFER_TOO_SMALL = 5,
  POSITROID_STATUS_OUT_OF_RANGE = 6,
  POSITROID_STATUS_PANIC = 7,
} PositroidStatus;

/**
 * Opaque ranked essential family.
 */
typedef struct PositroidFamily PositroidFamily;

/**
 * Opaque bounded affine permutation.
 */
typedef struct PositroidPerm PositroidPerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL, or 0
 * when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t positroid_last_error(char *buf, size_t len);

/**
 * Creates a permutation from its window `π(1), …, π(n)`.
 *
 * # Safety
 * `window` must point to `n` values; `out` must be writable.
 */
enum PositroidStatus positroid_perm_new(const int64_t *window,
                                        size_t n,
                                        struct PositroidPerm **out);

/**
 * # Safety
 * `p` must be null or a handle from this library not yet freed.
 */
void positroid_perm_free(struct PositroidPerm *p);

/**
 * Size `n`, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t positroid_perm_n(const struct PositroidPerm *p);

/**
 * Copies the window into `buf`, which must hold `n` values.
 *
 * # Safety
 * `p` must be a live handle and `buf` must point to `len` writable values.
 */
enum PositroidStatus positroid_perm_window(const struct PositroidPerm *p, int64_t *buf, size_t len);

/**
 * Rank of the positroid.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_perm_rank(const struct PositroidPerm *p, size_t *out);

/**
 * Rank of the cyclic interval `[start, start + len − 1]`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_perm_rank_interval(const struct PositroidPerm *p,
                                                  size_t start,
                                                  size_t len,
                                                  size_t *out);

/**
 * Inversion length, the codimension of the positroid cell.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_perm_length(const struct PositroidPerm *p, size_t *out);

/**
 * The ranked essential family of a permutation.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_perm_family(const struct PositroidPerm *p,
                                           struct PositroidFamily **out);

/**
 * JSON encoding `{"n":…,"window":[…]}`; release with [`positroid_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_perm_to_json(const struct PositroidPerm *p, char **out);

/**
 * Creates a family from parallel arrays of ranks, starts and lengths. The
 * full-set entry `(k, [1, n])` is added when absent.
 *
 * # Safety
 * The three arrays must each hold `count` values; `out` must be writable.
 */
enum PositroidStatus positroid_family_new(size_t n,
                                          size_t k,
                                          const size_t *ranks,
                                          const size_t *starts,
                                          const size_t *lens,
                                          size_t count,
                                          struct PositroidFamily **out);

/**
 * # Safety
 * `f` must be null or a handle from this library not yet freed.
 */
void positroid_family_free(struct PositroidFamily *f);

/**
 * Number of entries, including the full-set entry; 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t positroid_family_len(const struct PositroidFamily *f);

/**
 * Entry `index` in canonical order (by start, then length).
 *
 * # Safety
 * `f` must be a live handle; the outputs must be writable.
 */
enum PositroidStatus positroid_family_entry(const struct PositroidFamily *f,
                                            size_t index,
                                            size_t *rank,
                                            size_t *start,
                                            size_t *len);

/**
 * Rank of a cyclic interval from the family.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_rank(const struct PositroidFamily *f,
                                           size_t start,
                                           size_t len,
                                           size_t *out);

/**
 * Number of axiom violations (0 for a valid family).
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_violations(const struct PositroidFamily *f, size_t *out);

/**
 * `Σ (k − r) e_I` over the family.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_codim(const struct PositroidFamily *f, int64_t *out);

/**
 * The permutation of a valid family.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_to_perm(const struct PositroidFamily *f,
                                              struct PositroidPerm **out);

/**
 * Number of core entries.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_core_len(const struct PositroidFamily *f, size_t *out);

/**
 * JSON encoding with excess, connectedness and core annotations; release
 * with [`positroid_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PositroidStatus positroid_family_to_json(const struct PositroidFamily *f, char **out);

/**
 * Reconstructs a permutation from rank conditions given as parallel arrays;
 * the conditions must include the full interval.
 *
 * # Safety
 * The three arrays must each hold `count` values; `out` must be writable.
 */
enum PositroidStatus positroid_retrieve(size_t n,
                                        const size_t *ranks,
                                        const size_t *starts,
                                        const size_t *lens,
                                        size_t count,
                                        struct PositroidPerm **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void positroid_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSITROID_H */
