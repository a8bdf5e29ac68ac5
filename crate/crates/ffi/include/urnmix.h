#ifndef URNMIX_H
#define URNMIX_H

/* Generated by cbindgen from urnmix-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum UrnmixStatus {
  URNMIX_STATUS_OK = 0,
  // An argument lies outside the mathematical domain of the operation.
  URNMIX_STATUS_DOMAIN_ERROR = 1,
  // A structural contract was violated (lengths, normalization, rates).
  URNMIX_STATUS_CONTRACT_ERROR = 2,
  // A computation failed a numeric integrity check.
  URNMIX_STATUS_NUMERIC_ERROR = 3,
  // A required pointer argument was null.
  URNMIX_STATUS_NULL_POINTER = 4,
  // A panic was caught at the FFI boundary.
  URNMIX_STATUS_PANIC = 5,
} UrnmixStatus;

// Side of the burn-in window.
typedef enum UrnmixWindowKind {
  URNMIX_WINDOW_KIND_MINUS = 0,
  URNMIX_WINDOW_KIND_PLUS = 1,
} UrnmixWindowKind;

// Limit-profile selector.
typedef enum UrnmixRegime {
  // `k ≫ √n`; Gaussian profile at `n/4·log n + θn`. Ignores `alpha`.
  URNMIX_REGIME_LARGE = 0,
  // `k ≍ √n`; Poisson profile at `n/4·log n + θn`.
  URNMIX_REGIME_CRITICAL_QUARTER_LOG_N = 1,
  // `k ≍ √n`; Poisson profile at `n/2·log k + θn`.
  URNMIX_REGIME_CRITICAL_HALF_LOG_K = 2,
  // `k ≪ √n`; Gumbel profile at `n/2·log k + θn`. Ignores `alpha`.
  URNMIX_REGIME_SMALL = 3,
} UrnmixRegime;

// Opaque urn instance `(n, k)`.
typedef struct UrnmixParams UrnmixParams;

// Opaque probability vector over consecutive integer states.
typedef struct UrnmixPmf UrnmixPmf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an urn instance; requires `n >= 2` and `1 <= k <= n/2`.
enum UrnmixStatus urnmix_params_new(uint64_t n, uint64_t k, struct UrnmixParams **out);

// Releases an urn instance. Null is a no-op.
void urnmix_params_free(struct UrnmixParams *params);

enum UrnmixStatus urnmix_birth_rate(const struct UrnmixParams *params, uint64_t x, double *out);

enum UrnmixStatus urnmix_death_rate(const struct UrnmixParams *params, uint64_t x, double *out);

enum UrnmixStatus urnmix_total_rate(const struct UrnmixParams *params, uint64_t x, double *out);

// Closed-form transient mean `E_x0[X_t]`.
enum UrnmixStatus urnmix_mean_at(const struct UrnmixParams *params,
                                 uint64_t x0,
                                 double t,
                                 double *out);

// Closed-form transient variance `Var_x0[X_t]`.
enum UrnmixStatus urnmix_variance_at(const struct UrnmixParams *params,
                                     uint64_t x0,
                                     double t,
                                     double *out);

// Burn-in window time `T±(C)` in chain time units.
enum UrnmixStatus urnmix_window_time(const struct UrnmixParams *params,
                                     enum UrnmixWindowKind kind,
                                     double c,
                                     double *out);

// The hypergeometric equilibrium law.
enum UrnmixStatus urnmix_stationary_pmf(const struct UrnmixParams *params, struct UrnmixPmf **out);

// Exact law of `X_t` from the point mass at `x0`, by uniformization with
// L1 truncation budget `truncation_eps` (pass 0 for the default 1e-12).
enum UrnmixStatus urnmix_evolve_point(const struct UrnmixParams *params,
                                      uint64_t x0,
                                      double t,
                                      double truncation_eps,
                                      struct UrnmixPmf **out);

// `TV(P_x0(X_t ∈ ·), π)`.
enum UrnmixStatus urnmix_tv_to_equilibrium(const struct UrnmixParams *params,
                                           uint64_t x0,
                                           double t,
                                           double *out);

// Number of stored weights.
size_t urnmix_pmf_len(const struct UrnmixPmf *pmf);

// Global index of the first stored weight.
size_t urnmix_pmf_support_offset(const struct UrnmixPmf *pmf);

// Probability of `state` (zero outside the support). Null gives 0.
double urnmix_pmf_prob(const struct UrnmixPmf *pmf, size_t state);

enum UrnmixStatus urnmix_pmf_mean(const struct UrnmixPmf *pmf, double *out);

enum UrnmixStatus urnmix_pmf_variance(const struct UrnmixPmf *pmf, double *out);

// Copies the weights into `buf` (capacity `len`); `len` must be at least
// `urnmix_pmf_len`.
enum UrnmixStatus urnmix_pmf_copy_weights(const struct UrnmixPmf *pmf, double *buf, size_t len);

// Releases a pmf handle. Null is a no-op.
void urnmix_pmf_free(struct UrnmixPmf *pmf);

// Total-variation distance between two pmfs on the union of supports.
enum UrnmixStatus urnmix_tv_distance(const struct UrnmixPmf *a,
                                     const struct UrnmixPmf *b,
                                     double *out);

// Limit-profile value at window coordinate `theta`; `alpha` applies to
// the critical regimes only.
enum UrnmixStatus urnmix_limit_profile(enum UrnmixRegime regime,
                                       double alpha,
                                       double theta,
                                       double *out);

// Standard normal CDF.
double urnmix_normal_cdf(double x);

// `‖N(m, 1) - N(0, 1)‖_TV`.
double urnmix_gaussian_shift_tv(double m);

// Standard Gumbel tail `P(G > x)`.
double urnmix_gumbel_tail(double x);

// `‖Pois(λ₁) - Pois(λ₂)‖_TV` with absolute error at most `tol`
// (`tol` in `(0, 1e-6]`).
enum UrnmixStatus urnmix_poisson_tv(double lambda1, double lambda2, double tol, double *out);

// One simulated hitting time of state 0 from `x0`, on the stream
// `(seed, stream_id)`.
enum UrnmixStatus urnmix_hitting_time_zero(const struct UrnmixParams *params,
                                           uint64_t x0,
                                           uint64_t seed,
                                           uint64_t stream_id,
                                           double *out);

// One sample of the exponential sum `S_{x,y}` on `(seed, stream_id)`.
enum UrnmixStatus urnmix_exp_sum_sample(uint64_t x,
                                        uint64_t y,
                                        uint64_t seed,
                                        uint64_t stream_id,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* URNMIX_H */
