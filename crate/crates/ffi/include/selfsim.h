#ifndef SELFSIM_H
#define SELFSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every function.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SS_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SS_STATUS_INVALID_UTF8 = 2,
  /**
   * Config, element expression or option failed to parse.
   */
  SS_STATUS_PARSE = 3,
  /**
   * The config violates the family's hypotheses.
   */
  SS_STATUS_INVALID_CONFIG = 4,
  /**
   * The operation does not apply to this family.
   */
  SS_STATUS_UNSUPPORTED = 5,
  /**
   * A verification suite reported failures; the report is still returned.
   */
  SS_STATUS_VERIFICATION_FAILED = 6,
  /**
   * Automaton extraction hit the state cap; the cap report is returned.
   */
  SS_STATUS_CAP_EXCEEDED = 7,
  /**
   * Any other library error.
   */
  SS_STATUS_INTERNAL = 8,
  /**
   * A Rust panic was caught at the boundary.
   */
  SS_STATUS_PANIC = 9,
} SsStatus;

/**
 * Opaque instance handle.
 */
typedef struct SsInstance SsInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an instance from a JSON config and stores the handle in `*out`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum SsStatus ss_instance_from_json(const char *json, struct SsInstance **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `inst` is NULL or a handle not yet freed.
 */
void ss_instance_free(struct SsInstance *inst);

/**
 * Tree degree m = [G : H].
 *
 * # Safety
 * `inst` is a live handle; `out` is writable.
 */
enum SsStatus ss_instance_degree(const struct SsInstance *inst, size_t *out);

/**
 * Decomposition JSON of `expr`; a nonnegative `depth` returns the portrait.
 *
 * # Safety
 * `inst` is a live handle; `expr` is a NUL-terminated string; `out` is writable.
 */
enum SsStatus ss_decompose(const struct SsInstance *inst,
                           const char *expr,
                           int32_t depth,
                           char **out);

/**
 * State automaton of `expr` as "json" or "dot" text. On
 * [`SsStatus::CapExceeded`], `*out` holds the cap report instead.
 *
 * # Safety
 * `inst` is a live handle; `expr` and `format` are NUL-terminated strings;
 * `out` is writable.
 */
enum SsStatus ss_automaton(const struct SsInstance *inst,
                           const char *expr,
                           size_t cap,
                           const char *format,
                           char **out);

/**
 * Tameness and finiteness-type report (lamplighter family only).
 *
 * # Safety
 * `inst` is a live handle; `out` is writable.
 */
enum SsStatus ss_tame_report(const struct SsInstance *inst, char **out);

/**
 * Runs the comma-separated `suites` (NULL or "" for the defaults) with the
 * given seed. The JSON report is returned even when checks fail.
 *
 * # Safety
 * `inst` is a live handle; `suites` is NULL or a NUL-terminated string;
 * `out` is writable.
 */
enum SsStatus ss_verify(const struct SsInstance *inst,
                        const char *suites,
                        uint64_t seed,
                        char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` is NULL or a string from this library not yet freed.
 */
void ss_string_free(char *s);

/**
 * Message for the last failure on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *ss_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELFSIM_H */
