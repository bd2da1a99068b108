#ifndef WIGSTAB_H
#define WIGSTAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_UTF8 = 2,
  /**
   * Index out of range, control equal to target, bad outcome value.
   */
  WS_STATUS_INVALID_ARGUMENT = 3,
  WS_STATUS_PARSE = 4,
  /**
   * Dimension unsupported by the engine.
   */
  WS_STATUS_DIMENSION = 5,
  WS_STATUS_TOO_LARGE = 6,
  /**
   * A forced outcome contradicts a deterministic measurement.
   */
  WS_STATUS_IMPOSSIBLE_OUTCOME = 7,
  WS_STATUS_ORACLE_MISMATCH = 8,
  WS_STATUS_BUFFER_TOO_SMALL = 9,
  WS_STATUS_INTERNAL = 10,
  WS_STATUS_PANIC = 11,
} WsStatus;

/**
 * A Wigner frame for odd prime `d`.
 */
typedef struct WsFrame WsFrame;

/**
 * A measurement random stream.
 */
typedef struct WsRng WsRng;

/**
 * A qubit tableau.
 */
typedef struct WsTableau WsTableau;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into this library on the same thread.
 */
const char *ws_last_error(void);

/**
 * Static description of a status code.
 */
const char *ws_status_str(enum WsStatus status);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ws_string_free(char *s);

/**
 * Stream for shot `shot` under `seed`; the CLI uses the same derivation.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_rng_new(uint64_t seed, uint64_t shot, struct WsRng **out);

/**
 * # Safety
 * `rng` must be null or a live handle from [`ws_rng_new`].
 */
void ws_rng_free(struct WsRng *rng);

/**
 * Fresh frame `Φ = I`, `r = 0` on `n` qudits of odd prime dimension `d`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_frame_new(uintptr_t n, uint32_t d, struct WsFrame **out);

/**
 * # Safety
 * `frame` must be null or a live handle from [`ws_frame_new`].
 */
void ws_frame_free(struct WsFrame *frame);

/**
 * # Safety
 * `frame` must be a live handle; `n` and `d` writable.
 */
enum WsStatus ws_frame_shape(const struct WsFrame *frame, uintptr_t *n, uint32_t *d);

/**
 * Fourier gate on qudit `i` (0-based).
 *
 * # Safety
 * `frame` must be a live handle.
 */
enum WsStatus ws_frame_hadamard(struct WsFrame *frame, uintptr_t i);

/**
 * # Safety
 * `frame` must be a live handle.
 */
enum WsStatus ws_frame_phase(struct WsFrame *frame, uintptr_t i);

/**
 * # Safety
 * `frame` must be a live handle.
 */
enum WsStatus ws_frame_cnot(struct WsFrame *frame, uintptr_t control, uintptr_t target);

/**
 * Weyl translation `X^xpow Z^zpow`; both arrays hold `n` powers.
 *
 * # Safety
 * `frame` must be a live handle; `xpow` and `zpow` readable for `n` values.
 */
enum WsStatus ws_frame_translate(struct WsFrame *frame,
                                 const uint32_t *xpow,
                                 const uint32_t *zpow,
                                 uintptr_t n);

/**
 * Z measurement of qudit `i`, sampling from `rng` when random.
 *
 * # Safety
 * Handles must be live; `outcome` and `deterministic` writable.
 */
enum WsStatus ws_frame_measure(struct WsFrame *frame,
                               uintptr_t i,
                               struct WsRng *rng,
                               uint32_t *outcome,
                               bool *deterministic);

/**
 * Z measurement of qudit `i` with a prescribed outcome.
 *
 * # Safety
 * `frame` must be live; `deterministic` writable.
 */
enum WsStatus ws_frame_force(struct WsFrame *frame,
                             uintptr_t i,
                             uint32_t outcome,
                             bool *deterministic);

/**
 * Copies Φ row-major into `buf`, which must hold `4n²` values.
 *
 * # Safety
 * `frame` must be live; `buf` writable for `len` values.
 */
enum WsStatus ws_frame_phi(const struct WsFrame *frame, uint32_t *buf, uintptr_t len);

/**
 * Copies `r` into `buf`, which must hold `2n` values.
 *
 * # Safety
 * `frame` must be live; `buf` writable for `len` values.
 */
enum WsStatus ws_frame_r(const struct WsFrame *frame, uint32_t *buf, uintptr_t len);

/**
 * Canonical text dump: Φ rows, then `r:`.
 *
 * # Safety
 * `frame` must be live; `out` writable. Free the result with [`ws_string_free`].
 */
enum WsStatus ws_frame_dump(const struct WsFrame *frame, char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_tableau_new(uintptr_t n, struct WsTableau **out);

/**
 * # Safety
 * `tableau` must be null or a live handle from [`ws_tableau_new`].
 */
void ws_tableau_free(struct WsTableau *tableau);

/**
 * # Safety
 * `tableau` must be a live handle.
 */
enum WsStatus ws_tableau_h(struct WsTableau *tableau, uintptr_t i);

/**
 * # Safety
 * `tableau` must be a live handle.
 */
enum WsStatus ws_tableau_s(struct WsTableau *tableau, uintptr_t i);

/**
 * # Safety
 * `tableau` must be a live handle.
 */
enum WsStatus ws_tableau_cnot(struct WsTableau *tableau, uintptr_t control, uintptr_t target);

/**
 * # Safety
 * `tableau` must be a live handle.
 */
enum WsStatus ws_tableau_x(struct WsTableau *tableau, uintptr_t i);

/**
 * # Safety
 * `tableau` must be a live handle.
 */
enum WsStatus ws_tableau_z(struct WsTableau *tableau, uintptr_t i);

/**
 * # Safety
 * Handles must be live; `outcome` and `deterministic` writable.
 */
enum WsStatus ws_tableau_measure(struct WsTableau *tableau,
                                 uintptr_t i,
                                 struct WsRng *rng,
                                 uint32_t *outcome,
                                 bool *deterministic);

/**
 * # Safety
 * `tableau` must be live; `deterministic` writable.
 */
enum WsStatus ws_tableau_force(struct WsTableau *tableau,
                               uintptr_t i,
                               uint32_t outcome,
                               bool *deterministic);

/**
 * One line per row: x bits, z bits, `|`, sign bit.
 *
 * # Safety
 * `tableau` must be live; `out` writable. Free the result with [`ws_string_free`].
 */
enum WsStatus ws_tableau_dump(const struct WsTableau *tableau, char **out);

/**
 * Runs circuit text and returns the transcript as the CLI prints it.
 *
 * `engine` is `auto`, `wigner`, `tableau` or `oracle`; null means `auto`.
 *
 * # Safety
 * `circuit` (and `engine` if non-null) must be NUL-terminated; `out`
 * writable. Free the result with [`ws_string_free`].
 */
enum WsStatus ws_run_circuit(const char *circuit,
                             const char *engine,
                             uint64_t seed,
                             uint64_t shots,
                             bool dump,
                             bool oracle_check,
                             char **out);

/**
 * Crate version, static.
 */
const char *ws_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WIGSTAB_H */
