#ifndef EVERETT_SIM_H
#define EVERETT_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EverettEprbObservable {
  EVERETT_EPRB_OBSERVABLE_A1 = 0,
  EVERETT_EPRB_OBSERVABLE_A2 = 1,
  EVERETT_EPRB_OBSERVABLE_B1 = 2,
  EVERETT_EPRB_OBSERVABLE_B2 = 3,
} EverettEprbObservable;

typedef enum EverettStatus {
  EVERETT_STATUS_OK = 0,
  EVERETT_STATUS_NULL_POINTER = 1,
  EVERETT_STATUS_INVALID_UTF8 = 2,
  EVERETT_STATUS_CONFIG_ERROR = 3,
  EVERETT_STATUS_INVALID_ARGUMENT = 4,
  EVERETT_STATUS_NUMERICAL_ERROR = 5,
  EVERETT_STATUS_PANIC = 6,
} EverettStatus;

/**
 * Parsed run configuration.
 */
typedef struct EverettManifest EverettManifest;

/**
 * A dense operator on a labeled layout.
 */
typedef struct EverettOperator EverettOperator;

typedef struct EverettEprbReport {
  double mean_b1;
  double mean_b2;
  double mean_b1b2;
  double p_uu;
} EverettEprbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *everett_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *everett_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void everett_string_free(char *s);

/**
 * Parse config text into a manifest handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum EverettStatus everett_manifest_parse(const char *text, struct EverettManifest **out);

/**
 * # Safety
 * `m` must be null or a handle from [`everett_manifest_parse`].
 */
void everett_manifest_free(struct EverettManifest *m);

/**
 * Canonical config text for a manifest.
 *
 * # Safety
 * `m` must be a live manifest handle; `out_text` must be writable.
 */
enum EverettStatus everett_manifest_to_text(const struct EverettManifest *m, char **out_text);

/**
 * Run a manifest. The report (table or CSV) goes to `out_report`, the
 * process exit code the CLI would use to `out_exit_code`; diagnostics
 * for a nonzero exit code are available as the last error message.
 *
 * # Safety
 * `m` must be a live manifest handle; out-pointers must be writable.
 */
enum EverettStatus everett_manifest_run(const struct EverettManifest *m,
                                        char **out_report,
                                        int32_t *out_exit_code);

/**
 * EPRB report. `beta` points at three distinct eigenvalues, or is null for
 * the spin preset (0, 1, -1).
 *
 * # Safety
 * `beta` must be null or point at three doubles; `out` must be writable.
 */
enum EverettStatus everett_eprb_run(double theta1,
                                    double phi1,
                                    double theta2,
                                    double phi2,
                                    bool entangled,
                                    const double *beta,
                                    struct EverettEprbReport *out);

/**
 * Bell quantity for three analyzers at polar angle `theta` and azimuths
 * `phis[0..3]`. `out_addends` may be null.
 *
 * # Safety
 * `phis` must point at three doubles; `out_addends` must be null or have
 * room for three; `out_q` must be writable.
 */
enum EverettStatus everett_bell_q(double theta,
                                  const double *phis,
                                  double *out_q,
                                  double *out_addends);

/**
 * `⟨Ĝ(t₃)⟩` for three analyzers. `gamma` is null for the even preset
 * (0, 0, 1), which makes the result the even-parity probability.
 *
 * # Safety
 * `thetas` and `phis` must point at three doubles each; `gamma` must be
 * null or point at three doubles; `out` must be writable.
 */
enum EverettStatus everett_ghzm_run(const double *thetas,
                                    const double *phis,
                                    bool entangled,
                                    const double *gamma,
                                    double *out);

/**
 * Largest Bell quantity over all instruction-set distributions.
 *
 * # Safety
 * `out_q` must be writable.
 */
enum EverettStatus everett_lhv_eprb_q_max(double *out_q);

/**
 * GHZ instruction-set enumeration: number of sets examined, number
 * consistent with the three odd-parity constraints, and the classical
 * even-parity probability at (0°, 0°, 0°).
 *
 * # Safety
 * Out-pointers must be writable.
 */
enum EverettStatus everett_lhv_ghz(uint32_t *out_examined,
                                   uint32_t *out_survivors,
                                   double *out_p_even_000);

/**
 * One of the EPRB observables, either at `t₀` or evolved through the
 * full sequence, as an operator handle.
 *
 * # Safety
 * `beta` must be null or point at three doubles; `out` must be writable.
 */
enum EverettStatus everett_eprb_observable(double theta1,
                                           double phi1,
                                           double theta2,
                                           double phi2,
                                           bool entangled,
                                           const double *beta,
                                           enum EverettEprbObservable which,
                                           bool evolved,
                                           struct EverettOperator **out);

/**
 * # Safety
 * `op` must be null or a handle returned by this library.
 */
void everett_operator_free(struct EverettOperator *op);

/**
 * Total dimension of the operator's layout.
 *
 * # Safety
 * `op` must be a live handle; `out_dim` must be writable.
 */
enum EverettStatus everett_operator_dim(const struct EverettOperator *op, size_t *out_dim);

/**
 * Labels the operator acts on nontrivially, e.g. `{O1, S1}`.
 *
 * # Safety
 * `op` must be a live handle; `out_text` must be writable.
 */
enum EverettStatus everett_operator_support(const struct EverettOperator *op, char **out_text);

/**
 * Whether the operator acts as the identity on `label`, with the
 * reconstruction residual.
 *
 * # Safety
 * `op` must be a live handle; `label` a NUL-terminated string; out-pointers
 * writable.
 */
enum EverettStatus everett_operator_acts_trivially_on(const struct EverettOperator *op,
                                                      const char *label,
                                                      bool *out_trivial,
                                                      double *out_residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVERETT_SIM_H */
