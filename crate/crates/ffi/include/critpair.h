#ifndef CRITPAIR_H
#define CRITPAIR_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_ARGUMENT = 2,
  CP_STATUS_POLE_HIT = 3,
  CP_STATUS_NOT_CONVERGED = 4,
  CP_STATUS_NUMERICAL_FAILURE = 5,
  CP_STATUS_BUFFER_TOO_SMALL = 6,
  CP_STATUS_CONFIG = 7,
  CP_STATUS_IO = 8,
  CP_STATUS_PANIC = 9,
} CpStatus;

// Zero density selector for [`cp_sample_iid_zeros`].
typedef enum CpDensity {
  CP_DENSITY_UNIFORM_DISK = 0,
  CP_DENSITY_STD_COMPLEX_GAUSSIAN = 1,
} CpDensity;

// Opaque monic polynomial in root form.
typedef struct CpPoly CpPoly;

// Complex number with the layout of C `double _Complex`.
typedef struct CpComplex {
  double re;
  double im;
} CpComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *cp_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cp_version(void);

// Builds `prod_k (z - zeros[k])`. Free with [`cp_poly_free`].
//
// # Safety
// `zeros` must point to `len` values; `out` must be writable.
enum CpStatus cp_poly_new(const struct CpComplex *zeros, size_t len, struct CpPoly **out);

// Releases a polynomial; null is ignored.
//
// # Safety
// `poly` must come from [`cp_poly_new`] and not be used afterwards.
void cp_poly_free(struct CpPoly *poly);

// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CpStatus cp_poly_degree(const struct CpPoly *poly, size_t *out);

// Copies the zeros into `out[..cap]`; `*len` receives the degree.
//
// # Safety
// `poly` must be a live handle; `out` must hold `cap` values.
enum CpStatus cp_poly_zeros(const struct CpPoly *poly,
                            struct CpComplex *out,
                            size_t cap,
                            size_t *len);

// `p(z) = exp(*log_modulus) * (*phase)`.
//
// # Safety
// `poly` must be a live handle; outputs must be writable.
enum CpStatus cp_poly_eval_log(const struct CpPoly *poly,
                               struct CpComplex z,
                               double *log_modulus,
                               struct CpComplex *phase);

// `h(z) = p'(z) / p(z)`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CpStatus cp_poly_log_derivative(const struct CpPoly *poly,
                                     struct CpComplex z,
                                     struct CpComplex *out);

// All `degree - 1` critical points.
//
// # Safety
// `poly` must be a live handle; `out` must hold `cap` values.
enum CpStatus cp_critical_points(const struct CpPoly *poly,
                                 double tol,
                                 size_t max_iter,
                                 struct CpComplex *out,
                                 size_t cap,
                                 size_t *len);

// Newton iteration on `h` from `seed`, confined to `|z - seed| <= trust_radius`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CpStatus cp_newton_local(const struct CpPoly *poly,
                              struct CpComplex seed,
                              double tol,
                              size_t max_iter,
                              double trust_radius,
                              struct CpComplex *out);

// Number of critical points in the open disk `|z - center| < radius`.
//
// # Safety
// `poly` must be a live handle; `out` must be writable.
enum CpStatus cp_count_in_disk(const struct CpPoly *poly,
                               struct CpComplex center,
                               double radius,
                               size_t nodes,
                               size_t *out);

// Cauchy-Stieltjes transform of the uniform law on the unit disk.
struct CpComplex cp_cst_uniform_disk(struct CpComplex z);

// Cauchy-Stieltjes transform of the standard complex Gaussian.
struct CpComplex cp_cst_gaussian(struct CpComplex z);

// Per-trial seed derived from a master seed.
uint64_t cp_trial_seed(uint64_t master_seed, uint64_t trial_index);

// Draws `n` i.i.d. zeros seeded by `seed` into `out[..n]`.
//
// # Safety
// `out` must hold `n` values.
enum CpStatus cp_sample_iid_zeros(enum CpDensity density,
                                  size_t n,
                                  uint64_t seed,
                                  struct CpComplex *out);

// Eigenvalues of the row-major `dim x dim` matrix `a` into `out[..dim]`.
//
// # Safety
// `a` must hold `dim * dim` values and `out` must hold `dim`.
enum CpStatus cp_eigen_qr(const struct CpComplex *a, size_t dim, struct CpComplex *out);

// Runs the experiment described by a JSON config (same schema as the CLI
// `--config` file). `*passed` is 0 when a selftest or cst-check criterion
// failed.
//
// # Safety
// `config_json` must be a NUL-terminated UTF-8 string; `passed` may be null.
enum CpStatus cp_run_json(const char *config_json, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRITPAIR_H */
