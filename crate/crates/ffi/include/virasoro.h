#ifndef VIRASORO_H
#define VIRASORO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; `VIR_OK` is zero.
 */
typedef enum VirStatus {
  VIR_OK = 0,
  VIR_NULL_POINTER = 1,
  VIR_INVALID_ELEMENT = 2,
  VIR_SOLVER = 3,
  VIR_INTEGRATION = 4,
  VIR_NUMERIC = 5,
  VIR_USAGE = 6,
  VIR_PANIC = 7,
} VirStatus;

/**
 * Opaque handle to a circle diffeomorphism.
 */
typedef struct VirDiffeo VirDiffeo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next library call on the same thread.
 */
const char *vir_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *vir_status_string(enum VirStatus status);

/**
 * `1/8π²`.
 */
double vir_p1_hat_scale(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_identity(struct VirDiffeo **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_rotation(double angle, struct VirDiffeo **out);

/**
 * `θ ↦ θ + offset + Σₖ (a[k−1] cos kθ + b[k−1] sin kθ)`, `k = 1..=order`.
 *
 * # Safety
 * `a` and `b` must each point to `order` readable doubles (or be null
 * when `order` is zero); `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_fourier(double offset,
                                  const double *a,
                                  const double *b,
                                  size_t order,
                                  struct VirDiffeo **out);

/**
 * The map induced by `[[a, b], [c, d]]`, `ad − bc > 0`, on `ℝP¹`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_mobius(double a, double b, double c, double d, struct VirDiffeo **out);

/**
 * `outer ∘ inner`. Both inputs stay owned by the caller.
 *
 * # Safety
 * Handles must be live; `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_compose(const struct VirDiffeo *outer,
                                  const struct VirDiffeo *inner,
                                  struct VirDiffeo **out);

/**
 * # Safety
 * `g` must be live; `out` must be valid for writes.
 */
enum VirStatus vir_diffeo_inverse(const struct VirDiffeo *g, struct VirDiffeo **out);

/**
 * Lift value and first two derivatives at `theta`.
 *
 * # Safety
 * `g` must be live; each output pointer must be valid for writes.
 */
enum VirStatus vir_diffeo_eval(const struct VirDiffeo *g,
                               double theta,
                               double *value,
                               double *d1,
                               double *d2);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void vir_diffeo_free(struct VirDiffeo *g);

/**
 * `∫ log(γ₁′∘γ₂) d log γ₂′` on `quadrature_points` trapezoid nodes.
 *
 * # Safety
 * Handles must be live; `out` must be valid for writes.
 */
enum VirStatus vir_bott_thurston_r(const struct VirDiffeo *g1,
                                   const struct VirDiffeo *g2,
                                   size_t quadrature_points,
                                   double *out);

/**
 * Central charge of the transgression at `scale`; zero arguments select
 * the defaults (order 16, 2048 nodes, step 1e-3).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_central_charge(double scale,
                                  size_t fourier_order,
                                  size_t quadrature_points,
                                  double fd_step,
                                  double *out);

/**
 * Largest residual of the three coboundary identities over `samples`
 * random points.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_verify_main_lemma(size_t samples, uint64_t seed, double *out);

/**
 * Least-squares `λ` for which the lift satisfies the Whitney sum formula.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VirStatus vir_solve_whitney(double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIRASORO_H */
