#ifndef GROVER_QSS_H
#define GROVER_QSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QssStatus {
  QSS_STATUS_OK = 0,
  QSS_STATUS_NULL_POINTER = 1,
  QSS_STATUS_INVALID_ARGUMENT = 2,
  QSS_STATUS_DIMENSION_MISMATCH = 3,
  QSS_STATUS_NOT_NORMALIZED = 4,
  QSS_STATUS_BUFFER_TOO_SMALL = 5,
  QSS_STATUS_INVALID_UTF8 = 6,
  QSS_STATUS_PARSE = 7,
  QSS_STATUS_PANIC = 8,
  QSS_STATUS_INTERNAL = 9,
} QssStatus;

/**
 * Opaque state-vector handle.
 */
typedef struct QssState QssState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *qss_status_message(enum QssStatus status);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *qss_last_error_message(void);

/**
 * Catalog state `|S_k>` for `k` in 1..=64.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QssStatus qss_catalog_state(uint32_t k, struct QssState **out);

/**
 * State from `len` amplitudes (`len` a power of two, at most 16); must be
 * normalized to within 1e-12.
 *
 * # Safety
 * `re` and `im` must each point to `len` readable doubles; `out` must be
 * valid for writes.
 */
enum QssStatus qss_state_from_amplitudes(const double *re,
                                         const double *im,
                                         size_t len,
                                         struct QssState **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void qss_state_free(struct QssState *s);

/**
 * Number of qubits, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
uint32_t qss_state_num_qubits(const struct QssState *s);

/**
 * Copies the amplitudes into `re` / `im`, each holding at least `len`
 * doubles and `len >= 2^n`.
 *
 * # Safety
 * `s` must be a live handle; `re` and `im` must be writable for `len` doubles.
 */
enum QssStatus qss_state_amplitudes(const struct QssState *s, double *re, double *im, size_t len);

/**
 * Outcome probabilities in basis-index order.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable for `len` doubles.
 */
enum QssStatus qss_state_probabilities(const struct QssState *s, double *out, size_t len);

/**
 * `U_m |initial>` with `marked` a basis index of the same width.
 *
 * # Safety
 * `initial` must be a live handle; `out` must be valid for writes.
 */
enum QssStatus qss_encode(const struct QssState *initial, uint32_t marked, struct QssState **out);

/**
 * Two-phase decode of `encoded` with `initial` as the diffusion axis.
 * Writes the final state and the chosen intermediate mark `M`.
 *
 * # Safety
 * Both handles must be live; `out_final` and `out_m` must be valid for writes.
 */
enum QssStatus qss_collective_decode(const struct QssState *encoded,
                                     const struct QssState *initial,
                                     struct QssState **out_final,
                                     uint32_t *out_m);

/**
 * Seeded computational-basis shots; `counts[i]` receives the count of
 * basis index `i`.
 *
 * # Safety
 * `s` must be a live handle; `counts` must be writable for `len` values.
 */
enum QssStatus qss_sample(const struct QssState *s,
                          uint64_t shots,
                          uint64_t seed,
                          uint64_t *counts,
                          size_t len);

/**
 * Decode table `which` (1 or 2) for `|S_1>` marked with 110, as JSON.
 *
 * # Safety
 * `out` must be valid for writes; free the result with `qss_string_free`.
 */
enum QssStatus qss_table_json(uint32_t which, char **out);

/**
 * Runs a session from a JSON config. Writes the transcript JSON and
 * whether the dealer accepted.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; the outputs must be valid
 * for writes. Free the string with `qss_string_free`.
 */
enum QssStatus qss_protocol_json(const char *config_json, char **out_json, bool *out_accepted);

/**
 * Lie attack on mark `marked`; bit 2 of `flips` is participant 1.
 *
 * # Safety
 * `out` must be valid for writes; free the result with `qss_string_free`.
 */
enum QssStatus qss_attack_lie_json(uint32_t marked, uint32_t flips, char **out);

/**
 * Intercept attack; `k_guess == 0` runs the 64-guess enumeration.
 *
 * # Safety
 * `out` must be valid for writes; free the result with `qss_string_free`.
 */
enum QssStatus qss_attack_intercept_json(uint32_t k_true,
                                         uint32_t marked,
                                         uint32_t k_guess,
                                         char **out);

/**
 * Intercept-resend detection analysis.
 *
 * # Safety
 * `out` must be valid for writes; free the result with `qss_string_free`.
 */
enum QssStatus qss_attack_resend_json(char **out);

/**
 * Ancilla entanglement attack with the attacker on qubit `control` (1-3).
 *
 * # Safety
 * `out` must be valid for writes; free the result with `qss_string_free`.
 */
enum QssStatus qss_attack_entangle_json(uint32_t k, uint32_t marked, uint32_t control, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void qss_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROVER_QSS_H */
