#ifndef DGTIME_H
#define DGTIME_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes.
 */
typedef enum DgtStatus {
  DGT_STATUS_OK = 0,
  DGT_STATUS_NULL_POINTER = 1,
  DGT_STATUS_INVALID_ARGUMENT = 2,
  DGT_STATUS_DIMENSION_MISMATCH = 3,
  DGT_STATUS_INDEX_OUT_OF_RANGE = 4,
  DGT_STATUS_TIME_OUT_OF_RANGE = 5,
  DGT_STATUS_SINGULAR_MATRIX = 6,
  DGT_STATUS_FORCING_FAILED = 7,
  DGT_STATUS_NO_CONVERGENCE = 8,
  DGT_STATUS_BUFFER_TOO_SMALL = 9,
  DGT_STATUS_PANIC = 10,
} DgtStatus;

/**
 * Linear problem `u' + A u = f`, `u(0) = u0` on `(0, T]`.
 */
typedef struct DgtProblem DgtProblem;

/**
 * Continuous reconstruction of a DG solution.
 */
typedef struct DgtReconstruction DgtReconstruction;

/**
 * Piecewise-polynomial DG solution.
 */
typedef struct DgtSolution DgtSolution;

/**
 * Writes `f(t)` into `out[0..dim]`.
 */
typedef void (*DgtForcingFn)(double t, double *out, size_t dim, void *user_data);

/**
 * Settings for [`dgt_run_experiment`]; start from [`dgt_experiment_defaults`].
 */
typedef struct DgtExperimentOptions {
  size_t r;
  /**
   * Spatial intervals per direction (ignored for the ODE).
   */
  size_t p;
  size_t samples;
  bool cutoff;
  bool homogeneous;
  bool weighted;
  /**
   * Weight exponent for the `U` column when `weighted` is set.
   */
  double alpha;
} DgtExperimentOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *dgt_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *dgt_status_string(enum DgtStatus status);

/**
 * Scalar problem `u' + a u = 0`, `u(0) = u0`.
 *
 * # Safety
 * `out` must be null or a writable pointer.
 */
enum DgtStatus dgt_problem_scalar(double a, double u0, double final_time, struct DgtProblem **out);

/**
 * Tridiagonal `A` of order `n`: `lower[i] = A[i+1][i]`, `upper[i] = A[i][i+1]`
 * (both of length `n - 1`).
 *
 * # Safety
 * Array arguments must point to the stated number of values.
 */
enum DgtStatus dgt_problem_tridiagonal(size_t n,
                                       const double *lower,
                                       const double *diag,
                                       const double *upper,
                                       const double *u0,
                                       double final_time,
                                       struct DgtProblem **out);

/**
 * Sparse `A` of order `n` in compressed-row form (`indptr` has `n + 1`
 * entries, `indices` and `values` have `indptr[n]`).
 *
 * # Safety
 * Array arguments must point to the stated number of values.
 */
enum DgtStatus dgt_problem_csr(size_t n,
                               const size_t *indptr,
                               const size_t *indices,
                               const double *values,
                               const double *u0,
                               double final_time,
                               struct DgtProblem **out);

/**
 * The scalar model problem with its forcing.
 *
 * # Safety
 * `out` must be null or a writable pointer.
 */
enum DgtStatus dgt_problem_ode(struct DgtProblem **out);

/**
 * Method-of-lines 1D heat model with `p` intervals.
 *
 * # Safety
 * `out` must be null or a writable pointer.
 */
enum DgtStatus dgt_problem_heat1d(size_t p, bool homogeneous, struct DgtProblem **out);

/**
 * 2D heat model on a `p x p` grid.
 *
 * # Safety
 * `out` must be null or a writable pointer.
 */
enum DgtStatus dgt_problem_heat2d(size_t p, bool homogeneous, struct DgtProblem **out);

/**
 * Replaces the forcing with `callback`; a null callback sets `f = 0`.
 * `user_data` is passed through unchanged and must outlive the problem.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum DgtStatus dgt_problem_set_forcing(struct DgtProblem *problem,
                                       DgtForcingFn callback,
                                       void *user_data);

/**
 * State dimension, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t dgt_problem_dim(const struct DgtProblem *problem);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void dgt_problem_free(struct DgtProblem *problem);

/**
 * dG(r-1) on `n_steps` equal steps over `(0, T]`.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum DgtStatus dgt_solve_uniform(const struct DgtProblem *problem,
                                 size_t r,
                                 size_t n_steps,
                                 struct DgtSolution **out);

/**
 * dG(r-1) on the mesh `0 = nodes[0] < ... < nodes[n_nodes - 1]`.
 *
 * # Safety
 * `problem` must be a live handle and `nodes` must hold `n_nodes` values.
 */
enum DgtStatus dgt_solve_mesh(const struct DgtProblem *problem,
                              size_t r,
                              const double *nodes,
                              size_t n_nodes,
                              struct DgtSolution **out);

/**
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t dgt_solution_dim(const struct DgtSolution *solution);

/**
 * Number of time steps, or 0 for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t dgt_solution_steps(const struct DgtSolution *solution);

/**
 * `U(t)`; at a node the left limit is returned.
 *
 * # Safety
 * `solution` must be a live handle and `out` must hold `len` values.
 */
enum DgtStatus dgt_solution_eval(const struct DgtSolution *solution,
                                 double t,
                                 double *out,
                                 size_t len);

/**
 * `U(t_n^-)` for `0 <= n <= N` (`n = 0` gives `u0`).
 *
 * # Safety
 * `solution` must be a live handle and `out` must hold `len` values.
 */
enum DgtStatus dgt_solution_left_limit(const struct DgtSolution *solution,
                                       size_t n,
                                       double *out,
                                       size_t len);

/**
 * Jump `U(t_{n-1}^+) - U(t_{n-1}^-)` for `1 <= n <= N`.
 *
 * # Safety
 * `solution` must be a live handle and `out` must hold `len` values.
 */
enum DgtStatus dgt_solution_jump(const struct DgtSolution *solution,
                                 size_t n,
                                 double *out,
                                 size_t len);

/**
 * Norm of the jump at `t_{n-1}`, `sqrt(weight * sum v_i^2)`; use
 * `weight = 1` for the Euclidean norm.
 *
 * # Safety
 * `solution` must be a live handle and `out` a valid pointer.
 */
enum DgtStatus dgt_solution_jump_indicator(const struct DgtSolution *solution,
                                           size_t n,
                                           double weight,
                                           double *out);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void dgt_solution_free(struct DgtSolution *solution);

/**
 * Continuous reconstruction `U*` of degree `r`.
 *
 * # Safety
 * `solution` must be a live handle.
 */
enum DgtStatus dgt_reconstruct(const struct DgtSolution *solution, struct DgtReconstruction **out);

/**
 * `U*(t)` for `0 <= t <= T`.
 *
 * # Safety
 * `rec` must be a live handle and `out` must hold `len` values.
 */
enum DgtStatus dgt_reconstruction_eval(const struct DgtReconstruction *rec,
                                       double t,
                                       double *out,
                                       size_t len);

/**
 * # Safety
 * `rec` must be null or a handle not yet freed.
 */
void dgt_reconstruction_free(struct DgtReconstruction *rec);

/**
 * Default options for `"ode"`, `"heat1d"` or `"heat2d"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DgtStatus dgt_experiment_defaults(const char *name, struct DgtExperimentOptions *out);

/**
 * Runs a convergence study for the `n_len` step counts in `ns` and returns
 * the table as a CSV string, to be released with [`dgt_string_free`].
 *
 * # Safety
 * `name` must be a NUL-terminated string, `options` a valid pointer, `ns`
 * must hold `n_len` values and `csv_out` must be writable.
 */
enum DgtStatus dgt_run_experiment(const char *name,
                                  const struct DgtExperimentOptions *options,
                                  const size_t *ns,
                                  size_t n_len,
                                  char **csv_out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void dgt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGTIME_H */
