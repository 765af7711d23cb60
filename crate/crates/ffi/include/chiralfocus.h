#ifndef CHIRALFOCUS_H
#define CHIRALFOCUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_PARAMETER = 2,
  CF_STATUS_DEGENERATE_MEDIUM = 3,
  CF_STATUS_DEGENERATE_CONFIGURATION = 4,
  CF_STATUS_UNKNOWN_PRESET = 5,
  CF_STATUS_OUT_OF_RANGE = 6,
  CF_STATUS_PANIC = 7,
} CfStatus;

/**
 * Co-polarized-only or full reflection matrix in the focal integral.
 */
typedef enum CfGoMode {
  CF_GO_MODE_PAPER_FAITHFUL = 0,
  CF_GO_MODE_FULL_MATRIX = 1,
} CfGoMode;

/**
 * Opaque axial focal scan.
 */
typedef struct CfFocalScan CfFocalScan;

/**
 * Opaque two-layer stack.
 */
typedef struct CfStack CfStack;

typedef struct CfComplex {
  double re;
  double im;
} CfComplex;

/**
 * One homogeneous layer: relative permittivity and permeability, chirality.
 */
typedef struct CfLayer {
  struct CfComplex eps_r;
  struct CfComplex mu_r;
  double kappa;
} CfLayer;

/**
 * Reflection and transmission matrices, row-major in the (par, perp)
 * basis: element `[2*i + j]` is output `i` for unit input `j`.
 */
typedef struct CfScattering {
  struct CfComplex r[4];
  struct CfComplex t[4];
} CfScattering;

/**
 * Power fractions of the incident power.
 */
typedef struct CfPowers {
  double p_r_par;
  double p_r_perp;
  double p_t_par;
  double p_t_perp;
} CfPowers;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL,
 * or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cf_last_error_message(char *buf, size_t len);

/**
 * Builds a stack from two layers and explicit thicknesses.
 *
 * # Safety
 * `layer1`, `layer2` and `out` must be valid pointers.
 */
enum CfStatus cf_stack_new(const struct CfLayer *layer1,
                           double d1,
                           const struct CfLayer *layer2,
                           double d2,
                           double k0,
                           struct CfStack **out);

/**
 * Builds a stack with quarter-wave thicknesses.
 *
 * # Safety
 * `layer1`, `layer2` and `out` must be valid pointers.
 */
enum CfStatus cf_stack_quarter_wave(const struct CfLayer *layer1,
                                    const struct CfLayer *layer2,
                                    double k0,
                                    struct CfStack **out);

/**
 * Stack of a named planar preset such as `"fig2.4:cn-c"` or `"c-PEC"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CfStatus cf_stack_from_preset(const char *name, struct CfStack **out);

/**
 * Layers and thicknesses of a stack.
 *
 * # Safety
 * `stack` must come from a `cf_stack_*` constructor; the out pointers may be null.
 */
enum CfStatus cf_stack_describe(const struct CfStack *stack,
                                struct CfLayer *layer1,
                                double *d1,
                                struct CfLayer *layer2,
                                double *d2);

/**
 * # Safety
 * `stack` must be null or come from a `cf_stack_*` constructor, freed once.
 */
void cf_stack_free(struct CfStack *stack);

/**
 * Reflection and transmission matrices at incidence angle `theta_i` (radians).
 *
 * # Safety
 * `stack` and `out` must be valid pointers.
 */
enum CfStatus cf_scattering(const struct CfStack *stack, double theta_i, struct CfScattering *out);

/**
 * Power split for incident amplitudes `(e_par, e_perp)` at `theta_i` (radians).
 *
 * # Safety
 * `stack` and `out` must be valid pointers.
 */
enum CfStatus cf_powers(const struct CfStack *stack,
                        double theta_i,
                        struct CfComplex e_par,
                        struct CfComplex e_perp,
                        struct CfPowers *out);

/**
 * Axial focal scan for a named focal preset (`"fig3.2a"`, `"ideal-mirror"`, ...).
 * `step == 0` selects the default grid `kz = 80..120` by 0.25. Quadrature
 * orders of 0 select the sampling rule.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CfStatus cf_focal_scan_preset(const char *name,
                                   double kz_start,
                                   double kz_stop,
                                   double kz_step,
                                   size_t n_alpha,
                                   size_t n_gamma,
                                   enum CfGoMode mode,
                                   struct CfFocalScan **out);

/**
 * Axial focal scan of a paraboloid with focal length `f` and aperture
 * half-angle `h` (radians) coated with `stack`. Grid and order conventions
 * as in [`cf_focal_scan_preset`].
 *
 * # Safety
 * `stack` and `out` must be valid pointers.
 */
enum CfStatus cf_focal_scan_stack(const struct CfStack *stack,
                                  double f,
                                  double h,
                                  double kz_start,
                                  double kz_stop,
                                  double kz_step,
                                  size_t n_alpha,
                                  size_t n_gamma,
                                  enum CfGoMode mode,
                                  struct CfFocalScan **out);

/**
 * Number of samples in a scan, 0 for null.
 *
 * # Safety
 * `scan` must be null or a live scan handle.
 */
size_t cf_focal_scan_len(const struct CfFocalScan *scan);

/**
 * Sample `index`: axial coordinate `kz`, field components `u[3]` and `|U|`.
 *
 * # Safety
 * `scan` must be a live scan handle; `kz`, `u` (3 elements) and `mag` may be null.
 */
enum CfStatus cf_focal_scan_get(const struct CfFocalScan *scan,
                                size_t index,
                                double *kz,
                                struct CfComplex *u,
                                double *mag);

/**
 * Quadrature orders a scan was computed with.
 *
 * # Safety
 * `scan` must be a live scan handle; the out pointers may be null.
 */
enum CfStatus cf_focal_scan_orders(const struct CfFocalScan *scan,
                                   size_t *n_alpha,
                                   size_t *n_gamma);

/**
 * # Safety
 * `scan` must be null or a scan handle, freed once.
 */
void cf_focal_scan_free(struct CfFocalScan *scan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRALFOCUS_H */
