#ifndef QPOVM_H
#define QPOVM_H

/* Generated by cbindgen from the qpovm-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code for every FFI entry point.
 */
enum QpovmStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  /**
   * The call succeeded and all out parameters were written.
   */
  QPOVM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QPOVM_STATUS_NULL_POINTER = 1,
  /**
   * A probability argument lies outside `[0, 1]`.
   */
  QPOVM_STATUS_INVALID_PROBABILITY = 2,
  /**
   * Matrix inversion was requested for a singular matrix.
   */
  QPOVM_STATUS_SINGULAR_OPERATOR = 3,
  /**
   * A conditional state was requested for an impossible outcome.
   */
  QPOVM_STATUS_ZERO_PROBABILITY_OUTCOME = 4,
  /**
   * Strengths at 0 or 1 admit no inverse operator.
   */
  QPOVM_STATUS_NON_INVERTIBLE_MEASUREMENT = 5,
  /**
   * The outcome distribution is degenerate where a derivative is nonzero.
   */
  QPOVM_STATUS_DEGENERATE_DISTRIBUTION = 6,
  /**
   * The requested estimate cannot be extracted from the given design.
   */
  QPOVM_STATUS_NON_IDENTIFIABLE = 7,
  /**
   * A structural precondition on an argument was violated.
   */
  QPOVM_STATUS_INVALID_ARGUMENT = 8,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum QpovmStatus QpovmStatus;
#else
typedef int32_t QpovmStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque handle to a two-outcome measurement.
 */
typedef struct QpovmMeasurement QpovmMeasurement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *qpovm_version(void);

/**
 * Create a measurement along the z axis with switch probabilities `q`
 * (from `|0⟩`) and `p` (from `|1⟩`). On success writes a heap handle to
 * `out`; the caller owns it and must release it with
 * `qpovm_measurement_free`.
 *
 * # Safety
 *
 * `out` must be null or valid for a pointer write.
 */
QpovmStatus qpovm_measurement_new(double p, double q, QpovmMeasurement **out);

/**
 * Create a measurement along the axis with polar angle `chi` and azimuth
 * `psi`. Ownership as in `qpovm_measurement_new`.
 *
 * # Safety
 *
 * `out` must be null or valid for a pointer write.
 */
QpovmStatus qpovm_measurement_along(double p,
                                    double q,
                                    double chi,
                                    double psi,
                                    QpovmMeasurement **out);

/**
 * Release a handle. Null is accepted and ignored.
 *
 * # Safety
 *
 * `handle` must be null or a pointer obtained from
 * `qpovm_measurement_new`/`qpovm_measurement_along` that has not been
 * freed already.
 */
void qpovm_measurement_free(QpovmMeasurement *handle);

/**
 * Deviation of `E_m + E_m̄` from the identity in the max-abs norm.
 *
 * # Safety
 *
 * `handle` must be null or a live handle; `out` must be null or valid
 * for writes.
 */
QpovmStatus qpovm_measurement_completeness_defect(const QpovmMeasurement *handle, double *out);

/**
 * Outcome probabilities for the state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
 *
 * # Safety
 *
 * `handle` must be null or a live handle; the out pointers must each be
 * null or valid for writes.
 */
QpovmStatus qpovm_measurement_probabilities(const QpovmMeasurement *handle,
                                            double theta,
                                            double phi,
                                            double *out_m,
                                            double *out_mbar);

/**
 * Bloch angles of the conditional state after observing the given outcome
 * (0 = keep, 1 = switch).
 *
 * # Safety
 *
 * `handle` must be null or a live handle; the out pointers must each be
 * null or valid for writes.
 */
QpovmStatus qpovm_measurement_post_state(const QpovmMeasurement *handle,
                                         double theta,
                                         double phi,
                                         uint32_t outcome,
                                         double *out_theta,
                                         double *out_phi);

/**
 * Probability that the two-step reversal protocol succeeds,
 * `(1−p)(1−q) + pq`, independent of the input state.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
QpovmStatus qpovm_reversal_success_probability(double p, double q, double *out);

/**
 * Shannon entropy (nats) of the matched/unmatched record distribution.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
QpovmStatus qpovm_reversal_entropy(double p, double q, double *out);

/**
 * Monte Carlo estimate of the reversal success rate for the given input
 * state. Writes the empirical rate and the worst fidelity observed on any
 * successful trial (1 when no trial succeeded). Reproducible for a fixed
 * `seed` and `trials`.
 *
 * # Safety
 *
 * The out pointers must each be null or valid for writes.
 */
QpovmStatus qpovm_reversal_estimate_rate(double theta,
                                         double phi,
                                         double p,
                                         double q,
                                         uint64_t trials,
                                         uint64_t seed,
                                         double *out_rate,
                                         double *out_min_fidelity);

/**
 * Fisher information matrix of the outcome distribution with respect to
 * the state angles `(θ, φ)`, for a measurement along `(chi, psi)`.
 *
 * # Safety
 *
 * The out pointers must each be null or valid for writes.
 */
QpovmStatus qpovm_fisher_matrix(double theta,
                                double phi,
                                double chi,
                                double psi,
                                double p,
                                double q,
                                double *out_tt,
                                double *out_tp,
                                double *out_pp);

/**
 * Largest deviation found while cross-validating the three dilation
 * constructions (direct unitary, gate product, double-well propagator)
 * against each other and against the measurement statistics.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
QpovmStatus qpovm_dilation_max_deviation(double p, double q, double tau, double nu, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPOVM_H */
