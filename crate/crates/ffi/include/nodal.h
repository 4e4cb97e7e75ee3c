#ifndef NODAL_H
#define NODAL_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NodalStatus {
  /**
   * Success; every checked claim held.
   */
  NODAL_STATUS_OK = 0,
  /**
   * The computation ran and a claim failed.
   */
  NODAL_STATUS_CLAIM_FAILED = 1,
  /**
   * The input does not satisfy the hypothesis of the claim.
   */
  NODAL_STATUS_HYPOTHESIS_NOT_MET = 2,
  NODAL_STATUS_NULL_POINTER = -1,
  NODAL_STATUS_UTF8 = -2,
  /**
   * Polynomial or point text did not parse.
   */
  NODAL_STATUS_PARSE = -3,
  /**
   * Bad prime, or the configured primes disagree.
   */
  NODAL_STATUS_FIELD = -4,
  /**
   * Arguments outside the supported range.
   */
  NODAL_STATUS_INVALID = -5,
  /**
   * A scan did not stabilize or another computation error.
   */
  NODAL_STATUS_COMPUTATION = -6,
  NODAL_STATUS_PANIC = -7,
} NodalStatus;

/**
 * Opaque session handle.
 */
typedef struct NodalSession NodalSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *nodal_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *nodal_last_error(void);

/**
 * Creates a session from polynomial text in `x0..xn`.
 *
 * `points` (nullable) lists one projective point per line. `field`
 * (nullable) is `exact` or a comma list `fp:<p>,...`; null selects the
 * two default primes. On success `*out` receives a handle to release
 * with [`nodal_session_free`].
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum NodalStatus nodal_session_new(const char *polynomial,
                                   size_t n,
                                   const char *points,
                                   const char *field,
                                   struct NodalSession **out);

/**
 * Releases a session; null is ignored.
 *
 * # Safety
 * `session` must come from [`nodal_session_new`] and not be used afterwards.
 */
void nodal_session_free(struct NodalSession *session);

/**
 * Lets claim-checking commands run on smooth input.
 *
 * # Safety
 * `session` must be a live handle.
 */
enum NodalStatus nodal_session_set_allow_smooth(struct NodalSession *session, bool allow);

/**
 * Ambient dimension `n` and degree `d` of the session's hypersurface.
 *
 * # Safety
 * `session` must be a live handle; `n` and `d` must be writable.
 */
enum NodalStatus nodal_session_shape(const struct NodalSession *session, size_t *n, uint32_t *d);

/**
 * `dim (S/J(f))_k`, agreed on by every configured field.
 *
 * # Safety
 * `session` must be a live handle; `out` must be writable.
 */
enum NodalStatus nodal_milnor_dim(const struct NodalSession *session, uint32_t k, size_t *out);

/**
 * Runs a command (`hilbert`, `phi-check`, `koszul`, `lemma23`, `hodge`,
 * `period-diff` or `certify`) and stores its JSON report, without
 * timings, in `*out_json`.
 *
 * Returns the report status: [`NodalStatus::Ok`],
 * [`NodalStatus::ClaimFailed`], [`NodalStatus::HypothesisNotMet`], or the
 * error class when the report records an error. The report is written in
 * every case except argument errors.
 *
 * # Safety
 * `session` must be a live handle, `command` NUL-terminated and
 * `out_json` writable.
 */
enum NodalStatus nodal_run(const struct NodalSession *session,
                           const char *command,
                           char **out_json);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void nodal_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NODAL_H */
