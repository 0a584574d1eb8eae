/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef TWOPOINT_WAVE_H
#define TWOPOINT_WAVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TpwStatus {
  TPW_STATUS_OK = 0,
  TPW_STATUS_NULL_POINTER = 1,
  TPW_STATUS_INVALID_ARGUMENT = 2,
  // Constants violate a hypothesis; see [`tpw_validate_params`].
  TPW_STATUS_DOMAIN = 3,
  TPW_STATUS_INFEASIBLE = 4,
  TPW_STATUS_FREE_PARAMETER = 5,
  TPW_STATUS_MESH = 6,
  TPW_STATUS_SOLVER = 7,
  TPW_STATUS_CONFIG = 8,
  TPW_STATUS_IO = 9,
  TPW_STATUS_PANIC = 10,
} TpwStatus;

// Parsed scenario file.
typedef struct TpwScenario TpwScenario;

// Assembled Galerkin system on a uniform mesh.
typedef struct TpwSystem TpwSystem;

// Sampled trajectory with its energy records.
typedef struct TpwTrajectory TpwTrajectory;

typedef struct TpwParams {
  double h0;
  double h1;
  double lam0;
  double lam1;
  double ht0;
  double ht1;
  double lt0;
  double lt1;
  double k;
  double lam;
} TpwParams;

typedef struct TpwDerivedConstants {
  double c0;
  // `max{1, h0, 2 h1}`; not a valid bound when h1 > 0, see `c1_sharp`.
  double c1;
  double c1_sharp;
  double mu_min;
  double mu0;
  double eps1;
  double eps2;
  double delta;
  double beta1;
  double beta2;
  double htilde_budget;
} TpwDerivedConstants;

typedef struct TpwEnergySample {
  double t;
  double energy;
  double psi;
  double gamma;
  double sigma;
  double x;
  double u0_trace;
  double u1_trace;
} TpwEnergySample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL after a success.
// Valid until the next call into this library on the same thread.
const char *tpw_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *tpw_version(void);

// # Safety
// `out` must be valid for writes.
enum TpwStatus tpw_reference_params(struct TpwParams *out);

// Writes a bit mask of violated hypotheses to `out_mask` (0 when accepted).
// Bits: 1 finite, 2 h0 > 0, 4 h1 >= 0, 8 lam0 > 0, 16 lam1 > 0,
// 32 cross-damping bound, 64 K > 0, 128 lam > 0. The last two are only
// checked when `require_decay` is true.
//
// # Safety
// `params` must be readable and `out_mask` writable.
enum TpwStatus tpw_validate_params(const struct TpwParams *params,
                                   bool require_decay,
                                   uint32_t *out_mask);

// Derives the decay constants. `eps1`, `eps2` and `delta` may be NULL to
// use the defaults.
//
// # Safety
// Non-null pointers must be valid.
enum TpwStatus tpw_derive_constants(const struct TpwParams *params,
                                    const double *eps1,
                                    const double *eps2,
                                    const double *delta,
                                    struct TpwDerivedConstants *out);

// Assembles the system on `n_nodes` uniform nodes.
//
// # Safety
// `params` must be readable and `out` writable.
enum TpwStatus tpw_system_new(const struct TpwParams *params,
                              size_t n_nodes,
                              struct TpwSystem **out);

// # Safety
// `sys` must come from [`tpw_system_new`] and not be used afterwards.
void tpw_system_free(struct TpwSystem *sys);

// Number of coefficients, or 0 for NULL.
//
// # Safety
// `sys` must be NULL or a live handle.
size_t tpw_system_dim(const struct TpwSystem *sys);

// `||v||_1^2`, `a(v, v)` and `max |v|` of the finite element function with
// coefficients `c[0..len]`. Output pointers may be NULL.
//
// # Safety
// `sys` must be live, `c` readable for `len` values, outputs NULL or writable.
enum TpwStatus tpw_system_norms(const struct TpwSystem *sys,
                                const double *c,
                                size_t len,
                                double *out_norm_1_sq,
                                double *out_norm_a_sq,
                                double *out_sup);

// Integrates the unforced problem from coefficients `c0`, `v0` (each of
// length `len`) over `[0, horizon]` with step `dt`. `delta` weights the
// Lyapunov functional in the recorded samples.
//
// # Safety
// `sys` must be live, `c0` and `v0` readable for `len` values, `out` writable.
enum TpwStatus tpw_simulate(const struct TpwSystem *sys,
                            const double *c0,
                            const double *v0,
                            size_t len,
                            double horizon,
                            double dt,
                            double delta,
                            struct TpwTrajectory **out);

// # Safety
// `traj` must be NULL or a live handle.
size_t tpw_trajectory_len(const struct TpwTrajectory *traj);

// # Safety
// `traj` must be live and `out` writable.
enum TpwStatus tpw_trajectory_energy(const struct TpwTrajectory *traj,
                                     size_t index,
                                     struct TpwEnergySample *out);

// Copies the final coefficients and velocities into buffers of length `len`.
//
// # Safety
// `traj` must be live; `c_out` and `v_out` writable for `len` values.
enum TpwStatus tpw_trajectory_final_state(const struct TpwTrajectory *traj,
                                          double *c_out,
                                          double *v_out,
                                          size_t len);

// # Safety
// `traj` must come from this library and not be used afterwards.
void tpw_trajectory_free(struct TpwTrajectory *traj);

// Parses scenario text.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum TpwStatus tpw_scenario_parse(const char *text, struct TpwScenario **out);

// Reads and parses a scenario file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum TpwStatus tpw_scenario_load(const char *path, struct TpwScenario **out);

// Runs a scenario. Writes output files into `out_dir` unless it is NULL,
// stores the overall verdict in `out_passed`, and hands back the trajectory
// through `out_traj` unless it is NULL.
//
// # Safety
// `scenario` must be live; other pointers NULL or valid.
enum TpwStatus tpw_scenario_run(const struct TpwScenario *scenario,
                                const char *out_dir,
                                bool *out_passed,
                                struct TpwTrajectory **out_traj);

// # Safety
// `scenario` must come from this library and not be used afterwards.
void tpw_scenario_free(struct TpwScenario *scenario);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOPOINT_WAVE_H */
