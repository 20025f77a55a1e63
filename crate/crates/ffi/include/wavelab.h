#ifndef WAVELAB_H
#define WAVELAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WlFamily {
  WL_FAMILY_CLASSICAL_WAVE = 0,
  WL_FAMILY_ELECTROMAGNETIC = 1,
  WL_FAMILY_KLEIN_GORDON = 2,
  WL_FAMILY_SCHRODINGER_FREE = 3,
  /**
   * Schrodinger with the constant potential `v0`.
   */
  WL_FAMILY_SCHRODINGER_CONSTANT = 4,
} WlFamily;

typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_NULL_POINTER = 1,
  WL_STATUS_INVALID_ARGUMENT = 2,
  WL_STATUS_NUMERICAL_FAILURE = 3,
  WL_STATUS_GRID_TOO_COARSE = 4,
  WL_STATUS_BUFFER_TOO_SMALL = 5,
  WL_STATUS_PANIC = 6,
} WlStatus;

/**
 * Opaque sampled field on a periodic grid.
 */
typedef struct WlField WlField;

/**
 * Opaque Klein-Gordon versus Schrodinger comparison.
 */
typedef struct WlNrReport WlNrReport;

/**
 * Equation selector. `v` is read by the classical wave family, `m` by
 * Klein-Gordon and both Schrodinger families, `v0` by
 * `WL_FAMILY_SCHRODINGER_CONSTANT`.
 */
typedef struct WlEquation {
  enum WlFamily family;
  double m;
  double v;
  double v0;
} WlEquation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. The pointer stays valid until the next call into this library
 * on the same thread.
 */
const char *wl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *wl_version(void);

/**
 * Angular frequency `omega(k)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum WlStatus wl_omega(struct WlEquation eq, double k, double hbar, double c, double *out);

/**
 * Group velocity `d omega / dk`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum WlStatus wl_group_velocity(struct WlEquation eq, double k, double hbar, double c, double *out);

/**
 * Klein-Gordon frequency gap to "rest + Schrodinger" and its leading-order
 * bound `hbar^3 k^4 / (8 m^3 c^2)`.
 *
 * # Safety
 * `gap` and `bound` must be valid for one write each.
 */
enum WlStatus wl_nr_expansion_error(double m,
                                    double k,
                                    double hbar,
                                    double c,
                                    double *gap,
                                    double *bound);

/**
 * Per-mode dominance ratio of the second time derivative of the envelope
 * against the rest-energy terms.
 *
 * # Safety
 * `small`, `big` and `ratio` must be valid for one write each.
 */
enum WlStatus wl_dominance_ratio(double k,
                                 double m,
                                 double hbar,
                                 double c,
                                 double *small,
                                 double *big,
                                 double *ratio);

/**
 * Copies `n_points` samples into a new field on `[0, length)`.
 *
 * # Safety
 * `re` and `im` must be valid for `n_points` reads; `out` for one write.
 */
enum WlStatus wl_field_new(size_t n_points,
                           double length,
                           const double *re,
                           const double *im,
                           struct WlField **out);

/**
 * Normalized Gaussian packet `exp(-(x-x0)^2 / 4 sigma^2 + i k0 x)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum WlStatus wl_field_gaussian(size_t n_points,
                                double length,
                                double x0,
                                double k0,
                                double sigma,
                                struct WlField **out);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
size_t wl_field_len(const struct WlField *field);

/**
 * Copies the samples out. Fails with `WL_STATUS_BUFFER_TOO_SMALL` when
 * `capacity` is below [`wl_field_len`].
 *
 * # Safety
 * `field` must be a live handle; `re` and `im` valid for `capacity` writes.
 */
enum WlStatus wl_field_copy(const struct WlField *field, double *re, double *im, size_t capacity);

/**
 * Discrete L2 norm `sqrt(sum |psi_j|^2 dx)`.
 *
 * # Safety
 * `field` must be a live handle; `out` valid for one write.
 */
enum WlStatus wl_field_norm(const struct WlField *field, double *out);

/**
 * Releases a field. Null is ignored.
 *
 * # Safety
 * `field` must be null or a live handle, and is dangling afterwards.
 */
void wl_field_free(struct WlField *field);

/**
 * Exact spectral evolution to time `t`. Second-order families start on the
 * positive-frequency branch.
 *
 * # Safety
 * `psi0` must be a live handle; `out` valid for one write.
 */
enum WlStatus wl_evolve_spectral(const struct WlField *psi0,
                                 struct WlEquation eq,
                                 double hbar,
                                 double c,
                                 double t,
                                 struct WlField **out);

/**
 * Strang split-step Schrodinger evolution over `n_steps` steps of `dt`.
 * `potential` holds one value per sample, or is null for a free particle.
 *
 * # Safety
 * `psi0` must be a live handle; `potential` null or valid for
 * `wl_field_len(psi0)` reads; `out` valid for one write.
 */
enum WlStatus wl_evolve_split_step(const struct WlField *psi0,
                                   double m,
                                   const double *potential,
                                   double hbar,
                                   double c,
                                   double dt,
                                   size_t n_steps,
                                   struct WlField **out);

/**
 * `E(dx) = hbar^2 / (8 m dx^2) + m omega_c^2 dx^2 / 2`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum WlStatus wl_energy_bound(double m, double omega_c, double hbar, double delta_x, double *out);

/**
 * Golden-section minimum of the energy bound inside `(lo, hi)`.
 *
 * # Safety
 * `delta_x` and `energy` must be valid for one write each.
 */
enum WlStatus wl_minimize_bound(double m,
                                double omega_c,
                                double hbar,
                                double lo,
                                double hi,
                                double tol,
                                double *delta_x,
                                double *energy);

/**
 * Harmonic-oscillator ground state by imaginary-time relaxation on
 * `[0, length)` with the well centred at `length / 2`.
 *
 * # Safety
 * `energy` and `out` must be valid for one write each.
 */
enum WlStatus wl_ground_state(double m,
                              double omega_c,
                              double hbar,
                              size_t n_points,
                              double length,
                              double tau,
                              size_t max_iters,
                              double energy_tol,
                              double *energy,
                              struct WlField **out);

/**
 * Klein-Gordon envelope against Schrodinger evolution of a normalized
 * Gaussian packet, sampled every `snapshot_every` steps.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum WlStatus wl_kg_vs_schrodinger(size_t n_points,
                                   double length,
                                   double x0,
                                   double k0,
                                   double sigma,
                                   double m,
                                   double hbar,
                                   double c,
                                   double dt,
                                   size_t n_steps,
                                   size_t snapshot_every,
                                   struct WlNrReport **out);

/**
 * Number of sampled times; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t wl_nr_report_len(const struct WlNrReport *report);

/**
 * Copies times, relative deviations and dominance ratios. Any of the
 * output arrays may be null to skip it.
 *
 * # Safety
 * `report` must be a live handle; each non-null array valid for
 * `capacity` writes.
 */
enum WlStatus wl_nr_report_copy(const struct WlNrReport *report,
                                double *times,
                                double *deviation,
                                double *ratio,
                                size_t capacity);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must be null or a live handle, and is dangling afterwards.
 */
void wl_nr_report_free(struct WlNrReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAVELAB_H */
