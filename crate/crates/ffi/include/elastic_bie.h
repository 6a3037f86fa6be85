#ifndef ELASTIC_BIE_H
#define ELASTIC_BIE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EbStatus {
  EB_STATUS_OK = 0,
  EB_STATUS_NULL_POINTER = 1,
  EB_STATUS_INVALID_ARGUMENT = 2,
  EB_STATUS_SINGULAR_SYSTEM = 3,
  EB_STATUS_NEAR_BOUNDARY = 4,
  EB_STATUS_SOURCE_NOT_INSIDE = 5,
  EB_STATUS_INTERNAL = 6,
} EbStatus;

typedef enum EbShape {
  EB_SHAPE_APPLE = 0,
  EB_SHAPE_PEACH = 1,
  EB_SHAPE_DROP = 2,
  EB_SHAPE_HEART = 3,
  EB_SHAPE_UNIT_CIRCLE = 4,
} EbShape;

typedef enum EbWave {
  EB_WAVE_COMPRESSIONAL = 0,
  EB_WAVE_SHEAR = 1,
} EbWave;

// Obstacle, medium, incidence and discretization options.
typedef struct EbProblem EbProblem;

// Densities of a solved problem bound to its curve and medium.
typedef struct EbSolution EbSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on this thread.
const char *eb_last_error(void);

// Creates a problem with the default point-source data for `shape`
// (grading `p = 2` with shifted nodes for the drop and heart).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum EbStatus eb_problem_new(enum EbShape shape,
                             double lambda,
                             double mu,
                             double omega,
                             struct EbProblem **out);

// # Safety
// `problem` must be null or a handle from [`eb_problem_new`] not yet freed.
void eb_problem_free(struct EbProblem *problem);

// Switches to plane-wave incidence at angle `theta`.
//
// # Safety
// `problem` must be a live handle.
enum EbStatus eb_problem_set_plane_wave(struct EbProblem *problem,
                                        enum EbWave wave,
                                        double theta,
                                        double amplitude);

// Switches to manufactured point-source data with source `(x, y)`.
//
// # Safety
// `problem` must be a live handle.
enum EbStatus eb_problem_set_point_source(struct EbProblem *problem, double x, double y);

// Sets the graded-mesh exponent (`0` disables grading) and node shift.
//
// # Safety
// `problem` must be a live handle.
enum EbStatus eb_problem_set_grading(struct EbProblem *problem, double p, bool shifted);

// Assembles and solves with `2n` nodes.
//
// # Safety
// `problem` must be a live handle and `out` valid for one handle.
enum EbStatus eb_solve(const struct EbProblem *problem, size_t n, struct EbSolution **out);

// # Safety
// `solution` must be null or a handle from [`eb_solve`] not yet freed.
void eb_solution_free(struct EbSolution *solution);

// Condition estimate of the solved system.
//
// # Safety
// `solution` must be a live handle, `out` valid for one double.
enum EbStatus eb_solution_condition(const struct EbSolution *solution, double *out);

// Writes `phi_re, phi_im, psi_re, psi_im` at `(x, y)` to `out[0..4]`.
//
// # Safety
// `solution` must be a live handle, `out` valid for four doubles.
enum EbStatus eb_solution_potentials(const struct EbSolution *solution,
                                     double x,
                                     double y,
                                     double *out);

// Writes `v1_re, v1_im, v2_re, v2_im` at `(x, y)` to `out[0..4]`.
//
// # Safety
// `solution` must be a live handle, `out` valid for four doubles.
enum EbStatus eb_solution_displacement(const struct EbSolution *solution,
                                       double x,
                                       double y,
                                       double *out);

// Writes `phi_inf_re, phi_inf_im, psi_inf_re, psi_inf_im` in direction
// `(cos theta, sin theta)` to `out[0..4]`.
//
// # Safety
// `solution` must be a live handle, `out` valid for four doubles.
enum EbStatus eb_solution_far_field(const struct EbSolution *solution, double theta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELASTIC_BIE_H */
