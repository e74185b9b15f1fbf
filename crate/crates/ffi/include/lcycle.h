#ifndef LCYCLE_H
#define LCYCLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. Values match the CLI exit codes where
// they overlap.
typedef enum LcycleStatus {
  LCYCLE_STATUS_OK = 0,
  // Verification ran and at least one check failed.
  LCYCLE_STATUS_VERIFICATION_FAILED = 1,
  // Bad argument, malformed input, or null pointer.
  LCYCLE_STATUS_INVALID_ARGUMENT = 2,
  // A search bound or cap ran out before an answer was found.
  LCYCLE_STATUS_BOUND_EXHAUSTED = 3,
  // A panic was caught at the boundary.
  LCYCLE_STATUS_INTERNAL = 4,
} LcycleStatus;

typedef enum LcycleVerifyMode {
  LCYCLE_VERIFY_MODE_EXHAUSTIVE = 0,
  LCYCLE_VERIFY_MODE_CERTIFICATE = 1,
} LcycleVerifyMode;

// Opaque verification report.
typedef struct LcycleReport LcycleReport;

// Opaque integer set.
typedef struct LcycleSet LcycleSet;

// Opaque gadget or wall witness.
typedef struct LcycleWitness LcycleWitness;

typedef struct LcycleVerifyOptions {
  enum LcycleVerifyMode mode;
  uint64_t cycle_cap;
  uint64_t subset_cap;
  uint64_t case_cap;
  uint64_t path_cap;
} LcycleVerifyOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or `""`. Valid until
// the next call on this thread; do not free.
const char *lcycle_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void lcycle_string_free(char *s);

// Parses a set spec such as `"primes"`, `"powers:10"` or
// `"explicit:10,100"`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum LcycleStatus lcycle_set_parse(const char *spec, struct LcycleSet **out);

// Writes 1 to `out` if `n` is in the set, else 0.
//
// # Safety
// `set` must come from [`lcycle_set_parse`]; `out` must be writable.
enum LcycleStatus lcycle_set_contains(const struct LcycleSet *set, uint64_t n, uint8_t *out);

// # Safety
// `set` must be null or a live handle from this library.
void lcycle_set_free(struct LcycleSet *set);

// Builds the gadget witness (the grid with each edge replaced by paths
// of lengths `x-1`, `x`, `x+1`).
//
// # Safety
// `set` must be a live set handle; `out` must be writable.
enum LcycleStatus lcycle_gadget_construct(const struct LcycleSet *set,
                                          uint64_t t,
                                          uint64_t s,
                                          uint64_t x_bound,
                                          uint64_t a_max,
                                          struct LcycleWitness **out);

// Builds the weighted wall witness. `search_bound` is a decimal string
// (chord lengths routinely exceed 64 bits), or null for `10^30`.
//
// # Safety
// `set` must be a live set handle; `search_bound` null or NUL-terminated;
// `out` must be writable.
enum LcycleStatus lcycle_wall_construct(const struct LcycleSet *set,
                                        uint64_t ell,
                                        const char *search_bound,
                                        struct LcycleWitness **out);

// # Safety
// `w` must be a live witness handle.
uint64_t lcycle_witness_vertex_count(const struct LcycleWitness *w);

// # Safety
// `w` must be a live witness handle.
uint64_t lcycle_witness_edge_count(const struct LcycleWitness *w);

// Serializes the witness alone (without a document envelope).
//
// # Safety
// `w` must be a live witness handle; `out` must be writable.
enum LcycleStatus lcycle_witness_to_json(const struct LcycleWitness *w, char **out);

// Parses a witness written by [`lcycle_witness_to_json`].
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum LcycleStatus lcycle_witness_from_json(const char *json, struct LcycleWitness **out);

// # Safety
// `w` must be null or a live handle from this library.
void lcycle_witness_free(struct LcycleWitness *w);

struct LcycleVerifyOptions lcycle_verify_options_default(void);

// Verifies a witness. The report is written to `out` whenever
// verification ran, including on `LCYCLE_STATUS_VERIFICATION_FAILED`. `opts`
// may be null for the defaults.
//
// # Safety
// `w` must be a live witness handle; `opts` null or readable; `out`
// writable.
enum LcycleStatus lcycle_verify(const struct LcycleWitness *w,
                                const struct LcycleVerifyOptions *opts,
                                struct LcycleReport **out);

// JSON in, JSON out. `witness_json` is a witness document as written by
// `lcycle construct-*` (or a bare witness); `options_json` is null or an
// object with any of `mode`, `cycle_cap`, `subset_cap`, `case_cap`,
// `path_cap`, `extra_t`.
//
// # Safety
// String arguments must be NUL-terminated (`options_json` may be null);
// `out` must be writable.
enum LcycleStatus lcycle_verify_json(const char *witness_json,
                                     const char *options_json,
                                     char **out);

// # Safety
// `r` must be a live report handle.
uint8_t lcycle_report_passed(const struct LcycleReport *r);

// # Safety
// `r` must be a live report handle.
uint64_t lcycle_report_check_count(const struct LcycleReport *r);

// # Safety
// `r` must be a live report handle; `out` must be writable.
enum LcycleStatus lcycle_report_to_json(const struct LcycleReport *r, char **out);

// Human-readable report, one line per check.
//
// # Safety
// `r` must be a live report handle; `out` must be writable.
enum LcycleStatus lcycle_report_to_text(const struct LcycleReport *r, char **out);

// # Safety
// `r` must be null or a live handle from this library.
void lcycle_report_free(struct LcycleReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCYCLE_H */
