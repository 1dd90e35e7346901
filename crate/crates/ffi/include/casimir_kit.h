#ifndef CASIMIR_KIT_H
#define CASIMIR_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum CasimirStatus {
  CASIMIR_STATUS_OK = 0,
  CASIMIR_STATUS_NULL_POINTER = 1,
  CASIMIR_STATUS_INVALID_ARGUMENT = 2,
  CASIMIR_STATUS_NOT_CONVERGED = 3,
  /**
   * A pole or singular point was hit (plasmon pole, static limit, ...).
   */
  CASIMIR_STATUS_SINGULAR = 4,
  /**
   * Round-trip loop too close to 1, or a non-finite integrand.
   */
  CASIMIR_STATUS_NUMERICAL = 5,
  CASIMIR_STATUS_PANIC = 6,
} CasimirStatus;

/**
 * Opaque atom handle.
 */
typedef struct CasimirAtom CasimirAtom;

/**
 * Opaque cavity handle.
 */
typedef struct CasimirCavity CasimirCavity;

/**
 * Value with its error estimate.
 */
typedef struct CasimirResult {
  double value;
  double error_estimate;
  bool converged;
} CasimirResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *casimir_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *casimir_version(void);

/**
 * New cavity between mirrors with plasma frequencies `omega_p1`, `omega_p2`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum CasimirStatus casimir_cavity_new(double omega_p1,
                                      double omega_p2,
                                      double separation,
                                      double area,
                                      struct CasimirCavity **out);

/**
 * Identical mirrors with `lambda_p = 1` and unit area, at `L / lambda_P`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum CasimirStatus casimir_cavity_new_reduced(double l_over_lambda_p, struct CasimirCavity **out);

/**
 * Switches the cavity to perfect reflectors.
 *
 * # Safety
 * `cavity` must be a live handle from `casimir_cavity_new*`.
 */
enum CasimirStatus casimir_cavity_set_perfect(struct CasimirCavity *cavity);

/**
 * # Safety
 * `cavity` must be null or a live handle; it is invalid afterwards.
 */
void casimir_cavity_free(struct CasimirCavity *cavity);

/**
 * Force (positive = attraction).
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_force(const struct CasimirCavity *cavity,
                                 double rel_tol,
                                 struct CasimirResult *out);

/**
 * Energy.
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_energy(const struct CasimirCavity *cavity,
                                  double rel_tol,
                                  struct CasimirResult *out);

/**
 * Force reduction factor relative to perfect mirrors.
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_eta_f(const struct CasimirCavity *cavity,
                                 double rel_tol,
                                 struct CasimirResult *out);

/**
 * Energy reduction factor relative to perfect mirrors.
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_eta_e(const struct CasimirCavity *cavity,
                                 double rel_tol,
                                 struct CasimirResult *out);

/**
 * Energy as the zero-point shift of the coupled surface plasmons
 * (identical mirrors, short distances).
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_plasmon_shift_energy(const struct CasimirCavity *cavity,
                                                double rel_tol,
                                                struct CasimirResult *out);

/**
 * Short-distance energy from the double-factorial series.
 *
 * # Safety
 * `cavity` must be a live handle and `out` valid for writes.
 */
enum CasimirStatus casimir_short_distance_energy(const struct CasimirCavity *cavity,
                                                 struct CasimirResult *out);

/**
 * Short-distance slope of the force reduction factor.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CasimirStatus casimir_alpha(double tail_tol, double *out);

/**
 * Surface plasmon frequency at transverse wavevector `k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CasimirStatus casimir_plasmon_frequency(double omega_p, double k, double *out);

/**
 * Brewster (TM zero) frequency at transverse wavevector `k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CasimirStatus casimir_brewster_frequency(double omega_p, double k, double *out);

/**
 * New atom from `count` transitions (`energies[i]`, `weights[i]`).
 *
 * # Safety
 * `energies` and `weights` must point to `count` doubles; `out` must be
 * valid for writes.
 */
enum CasimirStatus casimir_atom_new(const double *energies,
                                    const double *weights,
                                    size_t count,
                                    struct CasimirAtom **out);

/**
 * # Safety
 * `atom` must be null or a live handle; it is invalid afterwards.
 */
void casimir_atom_free(struct CasimirAtom *atom);

/**
 * Full Casimir-Polder energy.
 *
 * # Safety
 * `atom1` and `atom2` must be live handles and `out` valid for writes.
 */
enum CasimirStatus casimir_cp_energy(const struct CasimirAtom *atom1,
                                     const struct CasimirAtom *atom2,
                                     double separation,
                                     double rel_tol,
                                     struct CasimirResult *out);

/**
 * Large-distance (retarded) limit of the Casimir-Polder energy.
 *
 * # Safety
 * `atom1` and `atom2` must be live handles and `out` valid for writes.
 */
enum CasimirStatus casimir_cp_retarded(const struct CasimirAtom *atom1,
                                       const struct CasimirAtom *atom2,
                                       double separation,
                                       struct CasimirResult *out);

/**
 * London energy by quadrature.
 *
 * # Safety
 * `atom1` and `atom2` must be live handles and `out` valid for writes.
 */
enum CasimirStatus casimir_london_energy(const struct CasimirAtom *atom1,
                                         const struct CasimirAtom *atom2,
                                         double separation,
                                         double rel_tol,
                                         struct CasimirResult *out);

/**
 * London energy in closed form.
 *
 * # Safety
 * `atom1` and `atom2` must be live handles and `out` valid for writes.
 */
enum CasimirStatus casimir_london_sum(const struct CasimirAtom *atom1,
                                      const struct CasimirAtom *atom2,
                                      double separation,
                                      struct CasimirResult *out);

/**
 * Ratio of the Casimir-Polder energy to its retarded limit.
 *
 * # Safety
 * `atom1` and `atom2` must be live handles and `out` valid for writes.
 */
enum CasimirStatus casimir_eta_cp(const struct CasimirAtom *atom1,
                                  const struct CasimirAtom *atom2,
                                  double separation,
                                  double rel_tol,
                                  struct CasimirResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASIMIR_KIT_H */
