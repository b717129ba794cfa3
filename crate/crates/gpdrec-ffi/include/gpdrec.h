#ifndef GPDREC_H
#define GPDREC_H

/* Generated by cbindgen from the gpdrec-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes mirroring the CLI exit codes.
typedef enum GpdStatus {
  // Operation succeeded and all asserted properties hold.
  GPD_STATUS_OK = 0,
  // A property failed; details via `gpdrec_last_error`.
  GPD_STATUS_PROPERTY_FAILED = 1,
  // Malformed or rejected input.
  GPD_STATUS_INVALID_INPUT = 2,
  // An enumeration or search cap was exceeded.
  GPD_STATUS_CAPACITY = 3,
  // A required pointer argument was null.
  GPD_STATUS_NULL_POINTER = 4,
} GpdStatus;

// A parsed instance: optional ring, optional graded groupoid.
typedef struct GpdInstance GpdInstance;

// A validated structure-constant presentation.
typedef struct GpdPresentation GpdPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *gpdrec_version(void);

// Message for the most recent error on this thread, or null.  The returned
// string must be freed with `gpdrec_string_free`.
char *gpdrec_last_error(void);

// Release a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned by a gpdrec function, or null.
void gpdrec_string_free(char *s);

// Parse an instance file (JSON).  Returns null on error.
//
// # Safety
// `json` must be a valid NUL-terminated string or null.
struct GpdInstance *gpdrec_instance_parse(const char *json);

// # Safety
// `h` must come from `gpdrec_instance_parse`, or be null.
void gpdrec_instance_free(struct GpdInstance *h);

// Parse a presentation file (JSON).  Returns null on error.
//
// # Safety
// `json` must be a valid NUL-terminated string or null.
struct GpdPresentation *gpdrec_presentation_parse(const char *json);

// # Safety
// `h` must come from `gpdrec_presentation_parse` or `gpdrec_scramble`, or be
// null.
void gpdrec_presentation_free(struct GpdPresentation *h);

// Export the instance's algebra presentation scrambled by a seeded
// diagonal-preserving graded isomorphism, writing the new handle to `out`.
// # Safety
// `h` must be a live instance handle or null; `out` must be writable.
enum GpdStatus gpdrec_scramble(const struct GpdInstance *h,
                               uint64_t seed,
                               struct GpdPresentation **out);

// Serialize a presentation handle to its JSON file format.
//
// # Safety
// `h` must be a live presentation handle or null; `out` must be writable.
enum GpdStatus gpdrec_presentation_to_json(const struct GpdPresentation *h, char **out);

// Check the local bisection hypothesis on a presentation.  `holds` receives
// the verdict; a failing hypothesis still returns `Ok` here since the check
// itself succeeded.
// # Safety
// `h` must be a live presentation handle or null; `holds` must be writable.
enum GpdStatus gpdrec_lbh_check(const struct GpdPresentation *h, uint64_t fiber_cap, bool *holds);

// Run the reconstruction pipeline on a presentation.  On success writes the
// recovered groupoid as an instance-file JSON string.  A failed local
// bisection hypothesis returns `PropertyFailed` with the witness in
// `gpdrec_last_error`.
// # Safety
// `h` must be a live presentation handle or null; `out` must be writable.
enum GpdStatus gpdrec_reconstruct(const struct GpdPresentation *h, uint64_t fiber_cap, char **out);

// scramble + reconstruct + graded-isomorphism check for `seeds` consecutive
// seeds starting at `base_seed`.  Returns `Ok` when every seed recovers the
// original groupoid.
// # Safety
// `h` must be a live instance handle or null.
enum GpdStatus gpdrec_roundtrip(const struct GpdInstance *h,
                                uint64_t base_seed,
                                uint64_t seeds,
                                uint64_t fiber_cap);

// Exhaustive unit census of R[G] for the ring of the instance and a cyclic
// group of the given order.
// # Safety
// `h` must be a live instance handle or null; the count pointers must be
// writable.
enum GpdStatus gpdrec_unit_census_cyclic(const struct GpdInstance *h,
                                         size_t group_order,
                                         uint64_t cap,
                                         size_t *unit_count,
                                         size_t *nontrivial_count);

// Export the unscrambled presentation of an instance as JSON.
//
// # Safety
// `h` must be a live instance handle or null; `out` must be writable.
enum GpdStatus gpdrec_export_presentation(const struct GpdInstance *h, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPDREC_H */
