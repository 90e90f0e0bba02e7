#ifndef HELE_SHAW_H
#define HELE_SHAW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Drive sign of a sheet: +1, -1 or 0 for an undriven cell.
typedef enum HsDrive {
  HS_DRIVE_NEGATIVE = -1,
  HS_DRIVE_OFF = 0,
  HS_DRIVE_POSITIVE = 1,
} HsDrive;

// Which field of a phase-field state to read or write.
typedef enum HsField {
  HS_FIELD_PHI = 0,
  HS_FIELD_U = 1,
} HsField;

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_INPUT = 2,
  HS_STATUS_CONFIG_INVALID = 3,
  HS_STATUS_DEGENERATE_PARAMS = 4,
  HS_STATUS_DEGENERATE_CURVE = 5,
  HS_STATUS_NO_INTERFACE = 6,
  HS_STATUS_NO_CONVERGENCE = 7,
  HS_STATUS_UNSTABLE_STEP = 8,
  HS_STATUS_SELF_INTERSECTION = 9,
  HS_STATUS_BUFFER_TOO_SMALL = 10,
  HS_STATUS_IO = 11,
  HS_STATUS_OTHER = 12,
  HS_STATUS_PANIC = 13,
} HsStatus;

// Opaque phase-field handle.
typedef struct HsPhaseField HsPhaseField;

// Opaque vortex-sheet handle.
typedef struct HsSheet HsSheet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, empty when none. The
// pointer stays valid until the next failing call on the same thread.
const char *hs_last_error(void);

// Library version as a static NUL-terminated string.
const char *hs_version(void);

// Creates a sheet from `n` interleaved marker positions. `closed` nonzero
// makes a closed curve; otherwise the curve is periodic in x with `period`.
//
// # Safety
// `xy` must point to `2 n` doubles and `out` to writable storage.
enum HsStatus hs_sheet_new(const double *xy,
                           size_t n,
                           int closed,
                           double period,
                           double atwood,
                           double b,
                           enum HsDrive drive,
                           double blob_delta,
                           struct HsSheet **out);

// # Safety
// `sheet` must come from [`hs_sheet_new`] and not be used afterwards.
void hs_sheet_free(struct HsSheet *sheet);

// Advances the sheet by `steps` steps of size `dt`.
//
// # Safety
// `sheet` must be a live handle.
enum HsStatus hs_sheet_step(struct HsSheet *sheet, double dt, size_t steps);

// Number of markers; redistribution may change it between steps.
//
// # Safety
// `sheet` must be a live handle or null.
size_t hs_sheet_len(const struct HsSheet *sheet);

// # Safety
// `sheet` must be a live handle or null.
double hs_sheet_time(const struct HsSheet *sheet);

// Copies interleaved marker positions into `out` (capacity `cap` doubles).
//
// # Safety
// `sheet` must be a live handle, `out` valid for `cap` doubles.
enum HsStatus hs_sheet_markers(const struct HsSheet *sheet, double *out, size_t cap);

// Copies the sheet strength γ per marker into `out`.
//
// # Safety
// `sheet` must be a live handle, `out` valid for `cap` doubles.
enum HsStatus hs_sheet_gamma(const struct HsSheet *sheet, double *out, size_t cap);

// Creates a phase-field state on an `nx × ny` grid. `phi` and `u` hold
// `nx·ny` values in row-major order (x fastest); a null `u` starts from
// zero. `c2sq` is the matching constant ℓ/K and `alpha` the kinetic
// coefficient.
//
// # Safety
// `phi` (and `u` when non-null) must point to `nx·ny` doubles; `out` must be
// writable.
enum HsStatus hs_phase_field_new(size_t nx,
                                 size_t ny,
                                 double lx,
                                 double ly,
                                 int periodic_y,
                                 double eps,
                                 double c2sq,
                                 double alpha,
                                 const double *phi,
                                 const double *u,
                                 struct HsPhaseField **out);

// # Safety
// `pf` must come from [`hs_phase_field_new`] and not be used afterwards.
void hs_phase_field_free(struct HsPhaseField *pf);

// Largest stable step of the handle's model.
//
// # Safety
// `pf` must be a live handle or null.
double hs_phase_field_stability_bound(const struct HsPhaseField *pf);

// # Safety
// `pf` must be a live handle.
enum HsStatus hs_phase_field_step(struct HsPhaseField *pf, double dt, size_t steps);

// # Safety
// `pf` must be a live handle or null.
double hs_phase_field_time(const struct HsPhaseField *pf);

// The conserved integral of εu + (c₂²/2)φ.
//
// # Safety
// `pf` must be a live handle or null.
double hs_phase_field_conserved(const struct HsPhaseField *pf);

// Copies φ or u into `out`.
//
// # Safety
// `pf` must be a live handle, `out` valid for `cap` doubles.
enum HsStatus hs_phase_field_get(const struct HsPhaseField *pf,
                                 enum HsField which,
                                 double *out,
                                 size_t cap);

// Surface-tension integral of the inner profile solved with `n` steps per
// half-width.
//
// # Safety
// `sigma` must be writable.
enum HsStatus hs_surface_tension(double half_width, size_t n, double *sigma);

// Linearized growth rate of mode `k` of a flat sheet traversed left to
// right (fluid 1 below).
//
// # Safety
// `rate` must be writable.
enum HsStatus hs_linear_growth_rate(double k,
                                    double atwood,
                                    double b,
                                    enum HsDrive drive,
                                    double *rate);

// Runs a TOML configuration. On success `*passed` is 1 when every run check
// passed and 0 otherwise.
//
// # Safety
// `toml` must be a NUL-terminated UTF-8 string, `passed` writable or null.
enum HsStatus hs_run_config(const char *toml, int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HELE_SHAW_H */
