#ifndef SVEULER_H
#define SVEULER_H

/* Generated by cbindgen from the sveuler-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `INVALID_CONFIG`, `BLOW_UP` and `IO` share their values
 * with the command line exit codes.
 */
typedef enum SvStatus {
  SV_STATUS_OK = 0,
  SV_STATUS_INVALID_CONFIG = 2,
  SV_STATUS_BLOW_UP = 3,
  SV_STATUS_IO = 4,
  SV_STATUS_NULL_POINTER = 5,
  SV_STATUS_INVALID_ARGUMENT = 6,
  SV_STATUS_BUFFER_TOO_SMALL = 7,
  SV_STATUS_PANIC = 8,
} SvStatus;

/**
 * Opaque simulation handle.
 */
typedef struct SvSimulation SvSimulation;

/**
 * Diagnostics of the current state; see the `diagnostics.csv` columns.
 */
typedef struct SvDiagnostics {
  uint64_t step;
  double time;
  double dt;
  double energy;
  double enstrophy;
  double omega_l1;
  double omega_l2;
  double omega_linf;
  double omega_lp;
  double omega_mean;
  double negative_part;
  double high_mode_mass;
  double max_speed;
  double max_divergence;
  double energy_rate;
  double enstrophy_rate;
  double err1_l2;
  double err2_l2;
} SvDiagnostics;

/**
 * Spectral-decay parameter sequences at a given `N`.
 */
typedef struct SvRegimeReport {
  /**
   * 1 when every regime inequality holds.
   */
  uint8_t valid;
  double nu;
  double theta_bound;
  double m_n;
  double a_n;
  double eps_n;
  double decay_alpha;
  double beta_n;
  double t_star;
} SvRegimeReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sv_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`) and returns the full message
 * length excluding the terminator. An empty message means the last call
 * succeeded.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sv_last_error_message(char *buf, size_t len);

/**
 * Builds a simulation from configuration text and stores the handle in
 * `*out`. On failure `*out` is set to null.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out` must be writable.
 */
enum SvStatus sv_simulation_new(const char *config, struct SvSimulation **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `sim` must be null or a handle from [`sv_simulation_new`] that has not
 * been freed.
 */
void sv_simulation_free(struct SvSimulation *sim);

/**
 * Takes one time step; the step size is stored in `*dt` when `dt` is not
 * null.
 *
 * # Safety
 * `sim` must be a live handle; `dt` null or writable.
 */
enum SvStatus sv_simulation_step(struct SvSimulation *sim, double *dt);

/**
 * Integrates until the simulation time equals `t` exactly.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum SvStatus sv_simulation_advance(struct SvSimulation *sim, double t);

/**
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum SvStatus sv_simulation_time(const struct SvSimulation *sim, double *out);

/**
 * Number of steps taken so far.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum SvStatus sv_simulation_steps(const struct SvSimulation *sim, uint64_t *out);

/**
 * Physical grid size `N_G`; vorticity buffers hold `N_G * N_G` values and
 * spectra `N_G / 2 + 1`.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum SvStatus sv_simulation_n_grid(const struct SvSimulation *sim, size_t *out);

/**
 * Copies the vorticity on the `N_G x N_G` grid, row-major with the `x1`
 * index outer, into `buf`.
 *
 * # Safety
 * `sim` must be a live handle; `buf` must hold `len` doubles.
 */
enum SvStatus sv_simulation_vorticity(const struct SvSimulation *sim, double *buf, size_t len);

/**
 * Copies the shell spectrum `E(kappa)`, `kappa = 0..=N`, into `buf`.
 *
 * # Safety
 * `sim` must be a live handle; `buf` must hold `len` doubles.
 */
enum SvStatus sv_simulation_spectrum(const struct SvSimulation *sim, double *buf, size_t len);

/**
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum SvStatus sv_simulation_diagnostics(const struct SvSimulation *sim, struct SvDiagnostics *out);

/**
 * Writes the current vorticity as a snapshot file.
 *
 * # Safety
 * `sim` must be a live handle; `path` a NUL-terminated string.
 */
enum SvStatus sv_simulation_write_snapshot(const struct SvSimulation *sim, const char *path);

/**
 * Evaluates the spectral-decay regime at `n` for `L^p` data, or for
 * measure data when `measure` is non-zero (`p` is then ignored). An
 * invalid parameter choice is reported through `valid`, not the status.
 *
 * # Safety
 * `out` must be writable.
 */
enum SvStatus sv_regime_evaluate(uint64_t n,
                                 double theta,
                                 double s,
                                 double p,
                                 uint8_t measure,
                                 double b,
                                 struct SvRegimeReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SVEULER_H */
