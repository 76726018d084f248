#ifndef PDM_LAB_H
#define PDM_LAB_H

#pragma once

/* Generated by cbindgen from pdm-lab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call.
typedef enum PdmStatus {
  // Success.
  PDM_STATUS_OK = 0,
  // A parameter is out of range or inconsistent.
  PDM_STATUS_INVALID_ARGUMENT = 1,
  // The background is singular or degenerate at the requested point.
  PDM_STATUS_SINGULAR_BACKGROUND = 2,
  // A solver or integrator failed to converge.
  PDM_STATUS_NUMERICAL_FAILURE = 3,
  // A required pointer argument was NULL.
  PDM_STATUS_NULL_POINTER = 4,
  // A string argument was not valid UTF-8 or not parseable.
  PDM_STATUS_INVALID_STRING = 5,
} PdmStatus;

// Exact Liouville dilaton background (opaque).
typedef struct PdmBackground PdmBackground;

// Solved oscillator spectrum (opaque).
typedef struct PdmSpectrum PdmSpectrum;

// Integrated trajectory (opaque).
typedef struct PdmTrajectory PdmTrajectory;

// All background fields at one point.
typedef struct PdmFieldPoint {
  double phi;
  double b;
  double b_inv;
  double sqrt_b;
  double inv_sqrt_b;
  double quarter_b;
  double mass;
} PdmFieldPoint;

// Flat summary of the dilaton-string tension report.
typedef struct PdmTensionSummary {
  double mu_quadrature;
  double mu_closed;
  double mu_kin;
  double mu_pot;
  // NaN when the asymptotic form is meaningless (ξ_C = 0).
  double mu_asymptotic;
  double rel_discrepancy;
  double r_crit;
  double xi_crit;
  // 1 when ln(ξ_C + 1) > 1 + ξ_crit.
  int32_t positivity_flag;
  double positivity_margin;
} PdmTensionSummary;

// One trajectory sample. Only the first `dim` entries of `x` and `p` are
// meaningful.
typedef struct PdmPhasePoint {
  double t;
  uint32_t dim;
  double x[2];
  double p[2];
  double energy;
} PdmPhasePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *pdm_version(void);

// Message describing the most recent failure on this thread. Never NULL;
// empty when no failure has occurred. Valid until the next failing call.
const char *pdm_last_error_message(void);

// Creates the f(ζ) = Aζ background on the Λ < 0 branch with explicit |Λ|.
//
// # Safety
// `out` must be a valid pointer; the result must be released with
// `pdm_background_free`.
enum PdmStatus pdm_background_new_linear(double kappa,
                                         double a_coeff,
                                         double abs_lambda,
                                         struct PdmBackground **out);

// Creates the f(ζ) = Aζ background normalized to C = 1 (|Λ| derived).
//
// # Safety
// As `pdm_background_new_linear`.
enum PdmStatus pdm_background_new_linear_c_unity(double kappa,
                                                 double a_coeff,
                                                 struct PdmBackground **out);

// Creates a background from a JSON descriptor
// `{"constants": {...}, "f": {...}, "branch": "..."}` (the same format the
// CLI writes). Complex coefficients serialize as `[re, im]`.
//
// # Safety
// `descriptor_json` must be a NUL-terminated string; `out` as above.
enum PdmStatus pdm_background_new_from_json(const char *descriptor_json,
                                            struct PdmBackground **out);

// Evaluates φ, b and its powers, and the effective mass at (x, y).
//
// # Safety
// `bg` must be a live handle, `out` a valid pointer.
enum PdmStatus pdm_background_eval(const struct PdmBackground *bg,
                                   double x,
                                   double y,
                                   struct PdmFieldPoint *out);

// Releases a background handle. NULL is ignored.
//
// # Safety
// `bg` must come from a `pdm_background_new_*` call and not be freed twice.
void pdm_background_free(struct PdmBackground *bg);

// Solves the k lowest eigenpairs of the PDM oscillator.
//
// `dim` is 1 or 2; `ell` is the angular sector (d = 2 only). Pass `n = 0`
// and/or `r_max <= 0` to use the built-in grid defaults.
//
// # Safety
// `out` must be a valid pointer; release with `pdm_spectrum_free`.
enum PdmStatus pdm_spectrum_solve(double lambda,
                                  double alpha,
                                  double m0,
                                  uint32_t dim,
                                  uint32_t ell,
                                  uint64_t n,
                                  double r_max,
                                  uint64_t k,
                                  struct PdmSpectrum **out);

// Number of computed eigenpairs; 0 for a NULL handle.
//
// # Safety
// `s` must be a live handle or NULL.
uint64_t pdm_spectrum_count(const struct PdmSpectrum *s);

// Fetches eigenvalue `index` (ascending order).
//
// # Safety
// `s` must be a live handle, `out` valid.
enum PdmStatus pdm_spectrum_eigenvalue(const struct PdmSpectrum *s, uint64_t index, double *out);

// Fetches the bound flag of state `index` (1 = bound, 0 = unbound).
//
// # Safety
// `s` must be a live handle, `out` valid.
enum PdmStatus pdm_spectrum_bound_flag(const struct PdmSpectrum *s, uint64_t index, int32_t *out);

// Gram-matrix deviation of the eigenvectors under the weighted measure.
//
// # Safety
// `s` must be a live handle, `out` valid.
enum PdmStatus pdm_spectrum_gram_deviation(const struct PdmSpectrum *s, double *out);

// Writes the asymptotic potential level 𝒰_∞ and returns 1, or returns 0
// when λ = 0 (no finite threshold).
//
// # Safety
// `s` must be a live handle, `out` valid.
int32_t pdm_spectrum_u_inf(const struct PdmSpectrum *s, double *out);

// Releases a spectrum handle. NULL is ignored.
//
// # Safety
// `s` must come from `pdm_spectrum_solve` and not be freed twice.
void pdm_spectrum_free(struct PdmSpectrum *s);

// Computes tension (quadrature and closed form), the critical radius and the
// positivity criterion in one call.
//
// # Safety
// `out` must be a valid pointer.
enum PdmStatus pdm_string_tension(double lambda,
                                  double abs_lambda,
                                  double kappa,
                                  double xi_c,
                                  struct PdmTensionSummary *out);

// Integrates the PDM oscillator with the implicit midpoint rule.
//
// λ = 0 runs with the coupling switched off (ordinary constant mass);
// λ > 0 uses the C = 1 dilaton background. The potential is harmonic with
// K = m₀α². `x0` and `p0` must point to `dim` doubles each.
//
// # Safety
// `x0`, `p0` and `out` must be valid; release via `pdm_trajectory_free`.
enum PdmStatus pdm_classical_integrate(double lambda,
                                       double alpha,
                                       double m0,
                                       uint32_t dim,
                                       const double *x0,
                                       const double *p0,
                                       double step,
                                       uint64_t steps,
                                       struct PdmTrajectory **out);

// Number of stored samples (steps + 1); 0 for a NULL handle.
//
// # Safety
// `tr` must be a live handle or NULL.
uint64_t pdm_trajectory_len(const struct PdmTrajectory *tr);

// Fetches sample `index`.
//
// # Safety
// `tr` must be a live handle, `out` valid.
enum PdmStatus pdm_trajectory_sample(const struct PdmTrajectory *tr,
                                     uint64_t index,
                                     struct PdmPhasePoint *out);

// Relative energy deviation over the whole run.
//
// # Safety
// `tr` must be a live handle, `out` valid.
enum PdmStatus pdm_trajectory_energy_drift(const struct PdmTrajectory *tr, double *out);

// Writes the measured oscillation period and returns 1, or returns 0 for a
// non-oscillatory trajectory.
//
// # Safety
// `tr` must be a live handle, `out` valid.
int32_t pdm_trajectory_period(const struct PdmTrajectory *tr, double *out);

// Releases a trajectory handle. NULL is ignored.
//
// # Safety
// `tr` must come from `pdm_classical_integrate` and not be freed twice.
void pdm_trajectory_free(struct PdmTrajectory *tr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDM_LAB_H */
