#ifndef CRYSTAL_PATHS_H
#define CRYSTAL_PATHS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_ARGUMENT = 2,
  CP_STATUS_INVALID_UTF8 = 3,
  CP_STATUS_GUARD = 4,
  CP_STATUS_INTERNAL = 5,
  CP_STATUS_PANIC = 6,
} CpStatus;

/**
 * Level-1 perfect crystal.
 */
typedef struct CpCrystal CpCrystal;

/**
 * Table of `g_j(b, mu)` for all `b`, `mu` and `j <= j_max`.
 */
typedef struct CpGTable CpGTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread (empty after success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *cp_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cp_string_free(char *s);

/**
 * Builds the level-1 perfect crystal of a type tag (`A1`, `B1`, `D1`,
 * `A2odd`, `A2even`, `D2`) and rank.
 *
 * # Safety
 * `type_tag` must be a NUL-terminated string; `out` must be writable.
 */
enum CpStatus cp_crystal_new(const char *type_tag, size_t rank, struct CpCrystal **out);

/**
 * # Safety
 * `c` must come from `cp_crystal_new` and not have been freed; null is ignored.
 */
void cp_crystal_free(struct CpCrystal *c);

/**
 * Number of elements.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum CpStatus cp_crystal_len(const struct CpCrystal *c, size_t *out);

/**
 * Energy `H(b (x) b2)` of two element indices.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum CpStatus cp_crystal_energy(const struct CpCrystal *c, size_t b, size_t b2, int64_t *out);

/**
 * Index of the element written as `label` (e.g. `0`, `2~`, `phi`).
 *
 * # Safety
 * `c` must be a live handle, `label` NUL-terminated and `out` writable.
 */
enum CpStatus cp_crystal_index_of(const struct CpCrystal *c, const char *label, size_t *out);

/**
 * Crystal graph as JSON.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum CpStatus cp_crystal_json(const struct CpCrystal *c, char **out);

/**
 * Builds the 1dsum table up to `j_max`.
 *
 * # Safety
 * `c` must be a live handle and `out` writable. The table does not borrow
 * the crystal.
 */
enum CpStatus cp_gtable_new(const struct CpCrystal *c, size_t j_max, struct CpGTable **out);

/**
 * # Safety
 * `t` must come from `cp_gtable_new` and not have been freed; null is ignored.
 */
void cp_gtable_free(struct CpGTable *t);

/**
 * `g_j(b, mu + delta * delta)` as polynomial JSON, where `mu` holds
 * `mu_len` Lambda coordinates.
 *
 * # Safety
 * `t` must be a live handle, `mu` must point to `mu_len` integers and
 * `out` must be writable.
 */
enum CpStatus cp_gtable_get(const struct CpGTable *t,
                            size_t j,
                            size_t b,
                            const int64_t *mu,
                            size_t mu_len,
                            int64_t delta,
                            char **out);

/**
 * Kostka-Foulkes polynomial `K_{xi,(l^j)}(q)` as polynomial JSON.
 *
 * # Safety
 * `xi` must point to `xi_len` integers and `out` must be writable.
 */
enum CpStatus cp_kostka(const uint32_t *xi,
                        size_t xi_len,
                        size_t l,
                        size_t j,
                        size_t n,
                        char **out);

/**
 * Checks the closed forms against path enumeration for `j <= j_max`;
 * writes whether every cell matched.
 *
 * # Safety
 * `type_tag` must be NUL-terminated and `ok` writable.
 */
enum CpStatus cp_verify_formulas(const char *type_tag, size_t rank, size_t j_max, bool *ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRYSTAL_PATHS_H */
