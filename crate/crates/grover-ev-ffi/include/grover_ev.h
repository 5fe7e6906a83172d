#ifndef GROVER_EV_H
#define GROVER_EV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirrored into the C header.
 */
typedef enum GroverStatus {
  Ok = 0,
  NullPointer = 1,
  QubitCountOutOfRange = 2,
  MarkedOutOfRange = 3,
  DegenerateInstance = 4,
  InfeasibleResolution = 5,
  InvalidArgument = 6,
  SearchFailed = 7,
  InternalError = 8,
} GroverStatus;

/**
 * Opaque search-instance handle.
 */
typedef struct GroverInstance GroverInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Short static description of a status code.
 */
const char *grover_status_message(enum GroverStatus status);

/**
 * Creates a search instance over 2^num_qubits locations with the given
 * marked set.
 *
 * # Safety
 * `marked` must point to `marked_len` readable u64 values and
 * `out_instance` must be a valid writable pointer.
 */
enum GroverStatus grover_instance_new(uintptr_t num_qubits,
                                      const uint64_t *marked,
                                      uintptr_t marked_len,
                                      struct GroverInstance **out_instance);

/**
 * Creates an instance with `num_marked` randomly placed marked items.
 *
 * # Safety
 * `out_instance` must be a valid writable pointer.
 */
enum GroverStatus grover_instance_random(uintptr_t num_qubits,
                                         uint64_t num_marked,
                                         uint64_t seed,
                                         struct GroverInstance **out_instance);

/**
 * Releases an instance handle. Passing NULL is a no-op.
 *
 * # Safety
 * `instance` must have been returned by an instance constructor and not
 * already freed.
 */
void grover_instance_free(struct GroverInstance *instance);

/**
 * Rotation angle theta = arccos(1 - 2M/N).
 *
 * # Safety
 * `instance` and `out_theta` must be valid pointers.
 */
enum GroverStatus grover_theta(const struct GroverInstance *instance, double *out_theta);

/**
 * Standard-version iteration count floor(sqrt(N/M) pi/4), clamped at 1.
 *
 * # Safety
 * `instance` and `out_m` must be valid pointers.
 */
enum GroverStatus grover_m_standard(const struct GroverInstance *instance, uint64_t *out_m);

/**
 * EV attenuation A_m after m iterations.
 *
 * # Safety
 * `instance` and `out_attenuation` must be valid pointers.
 */
enum GroverStatus grover_attenuation_after(const struct GroverInstance *instance,
                                           uint64_t m,
                                           double *out_attenuation);

/**
 * Minimum truncated iteration count for device resolution epsilon.
 *
 * # Safety
 * `instance` and `out_m` must be valid pointers.
 */
enum GroverStatus grover_min_truncated_iterations(const struct GroverInstance *instance,
                                                  double epsilon,
                                                  uint64_t *out_m);

/**
 * Standard PM version; writes the sampled location.
 *
 * Returns `SearchFailed` when the measured location is unmarked (a
 * legitimate probabilistic miss); `out_location` still holds it.
 *
 * # Safety
 * `instance` and `out_location` must be valid pointers.
 */
enum GroverStatus grover_run_pm(const struct GroverInstance *instance,
                                uint64_t seed,
                                uint64_t *out_location);

/**
 * Standard EV version (filtered cascade when more than one item is
 * marked). `ensemble_size` 0 reads exact expectation values.
 *
 * # Safety
 * `instance`, `out_location` and `out_runs_used` must be valid pointers.
 */
enum GroverStatus grover_run_ev_standard(const struct GroverInstance *instance,
                                         uint64_t ensemble_size,
                                         uint64_t seed,
                                         double epsilon,
                                         uint64_t *out_location,
                                         uint64_t *out_runs_used);

/**
 * Truncated EV version at device resolution epsilon.
 *
 * # Safety
 * `instance` and the out-pointers must be valid.
 */
enum GroverStatus grover_run_ev_truncated(const struct GroverInstance *instance,
                                          double epsilon,
                                          uint64_t ensemble_size,
                                          uint64_t seed,
                                          uint64_t *out_location,
                                          uint64_t *out_iterations,
                                          uint64_t *out_runs_used);

/**
 * Runs the truncated EV version and returns the full result record as a
 * JSON string (same schema as the CLI). Free it with
 * `grover_string_free`.
 *
 * # Safety
 * `instance` and `out_json` must be valid pointers.
 */
enum GroverStatus grover_run_json(const struct GroverInstance *instance,
                                  double epsilon,
                                  uint64_t ensemble_size,
                                  uint64_t seed,
                                  char **out_json);

/**
 * Releases a string returned by `grover_run_json`. NULL is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not already freed.
 */
void grover_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROVER_EV_H */
