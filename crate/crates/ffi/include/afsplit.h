#ifndef AFSPLIT_H
#define AFSPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum AfStatus {
  AF_STATUS_OK = 0,
  AF_STATUS_NULL_POINTER = 1,
  AF_STATUS_INVALID_UTF8 = 2,
  AF_STATUS_PARSE_ERROR = 3,
  AF_STATUS_INVALID_INPUT = 4,
  AF_STATUS_TIMED_OUT = 5,
  // A combined labeling failed the final stability check.
  AF_STATUS_INVARIANT_VIOLATION = 6,
  AF_STATUS_BUFFER_TOO_SMALL = 7,
  AF_STATUS_INTERNAL = 8,
} AfStatus;

typedef enum AfMethod {
  AF_METHOD_DIRECT = 0,
  AF_METHOD_SPLIT_HO = 1,
  AF_METHOD_SPLIT_BC = 2,
} AfMethod;

// Opaque framework handle.
typedef struct AfFramework AfFramework;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses apx text (`arg(a).` / `att(a,b).` facts, one per line).
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum AfStatus af_framework_parse_apx(const char *text, struct AfFramework **out);

// Builds a framework on arguments `0..n` from `attack_count` (source, target)
// pairs stored flat in `attacks` (`2 * attack_count` entries).
//
// # Safety
// `attacks` must point to `2 * attack_count` readable values (or be null when
// `attack_count` is 0) and `out` must be a valid pointer.
enum AfStatus af_framework_from_attacks(uint32_t n,
                                        const uint32_t *attacks,
                                        size_t attack_count,
                                        struct AfFramework **out);

// `m` distinct attacks on `n` arguments drawn from `seed`.
//
// # Safety
// `out` must be a valid pointer.
enum AfStatus af_framework_generate_random(uint32_t n,
                                           size_t m,
                                           uint64_t seed,
                                           struct AfFramework **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `f` must come from an `af_framework_*` constructor and not be used again.
void af_framework_free(struct AfFramework *f);

// Number of arguments; 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t af_framework_argument_count(const struct AfFramework *f);

// Number of attacks; 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t af_framework_attack_count(const struct AfFramework *f);

// Serializes to apx text.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AfStatus af_framework_to_apx(const struct AfFramework *f, char **out);

// Counts stable labelings. `timeout_ms = 0` means no limit.
//
// # Safety
// `f` must be a live handle and `out_count` a valid pointer.
enum AfStatus af_count_stable(const struct AfFramework *f,
                              enum AfMethod method,
                              uint64_t timeout_ms,
                              size_t *out_count);

// Solves and renders the result as one JSON object:
// `{"framework":"","method":..,"elapsed_ms":..,"censored":false,"seed":null,"stable_labelings":[{"in":[..],"out":[..]}]}`.
//
// # Safety
// `f` must be a live handle and `out_json` a valid pointer.
enum AfStatus af_solve_json(const struct AfFramework *f,
                            enum AfMethod method,
                            uint64_t timeout_ms,
                            char **out_json);

// Size `k` of the directed minimum cut (attacks from the second side into
// the first).
//
// # Safety
// `f` must be a live handle and `out_k` a valid pointer.
enum AfStatus af_min_cut_k(const struct AfFramework *f, size_t *out_k);

// Balanced cut grown from argument id `start` (negative: lowest id).
//
// The ids of the first side are written to `a1` in ascending order and their
// number to `a1_len`. If `capacity` is too small, only `a1_len` is written
// and `BufferTooSmall` is returned.
//
// # Safety
// `f` must be a live handle, `a1` must have room for `capacity` values (or be
// null when `capacity` is 0) and `a1_len`, `out_k` must be valid pointers.
enum AfStatus af_balanced_cut(const struct AfFramework *f,
                              int64_t start,
                              uint32_t *a1,
                              size_t capacity,
                              size_t *a1_len,
                              size_t *out_k);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void af_string_free(char *s);

// Description of the last failure on this thread, or null. Valid until the
// next call into this library on the same thread.
const char *af_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFSPLIT_H */
