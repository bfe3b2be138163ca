#ifndef HBAR_SIM_H
#define HBAR_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Pipeline stage for [`hbar_scenario_run`].
typedef enum HbarStage {
  HBAR_STAGE_TRAJECTORY = 0,
  HBAR_STAGE_EXCITE = 1,
  HBAR_STAGE_EVOLVE = 2,
  HBAR_STAGE_ENTROPY = 3,
  HBAR_STAGE_REPORT = 4,
} HbarStage;

// Result code of every fallible call.
typedef enum HbarStatus {
  HBAR_STATUS_OK = 0,
  HBAR_STATUS_NULL_POINTER = 1,
  HBAR_STATUS_INVALID_UTF8 = 2,
  HBAR_STATUS_DOMAIN = 3,
  HBAR_STATUS_DEGENERATE_MODE = 4,
  HBAR_STATUS_NON_CONVERGENCE = 5,
  HBAR_STATUS_POSITIVITY = 6,
  HBAR_STATUS_CONFIG_SYNTAX = 7,
  HBAR_STATUS_CONFIG_VALIDATION = 8,
  HBAR_STATUS_IO = 9,
  HBAR_STATUS_SERIALIZE = 10,
  HBAR_STATUS_BUFFER_TOO_SMALL = 11,
  HBAR_STATUS_PANIC = 12,
} HbarStatus;

// Opaque black hole.
typedef struct HbarBlackHole HbarBlackHole;

// Opaque photon-number distribution of one mode.
typedef struct HbarPopulations HbarPopulations;

// Opaque scenario result.
typedef struct HbarReport HbarReport;

// Opaque parsed scenario.
typedef struct HbarScenario HbarScenario;

// Emission/absorption rates of one mode.
typedef struct HbarModeRates {
  double xi;
  double suppression;
  double gamma_e;
  double gamma_a;
  double injection_rate_r;
  double kappa_leak;
} HbarModeRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *hbar_version(void);

// Message of the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *hbar_last_error_message(void);

// Black hole of `mass_kg` in SI units.
//
// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_black_hole_new(double mass_kg, struct HbarBlackHole **out);

// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_black_hole_solar(double solar_masses, struct HbarBlackHole **out);

// # Safety
// `bh` must come from this library and not be used afterwards.
void hbar_black_hole_free(struct HbarBlackHole *bh);

// Hawking temperature in kelvin.
//
// # Safety
// `bh` and `out` must be valid pointers.
enum HbarStatus hbar_black_hole_hawking_temperature(const struct HbarBlackHole *bh, double *out);

// Gravitational radius `2GM/c^2` in meters.
//
// # Safety
// `bh` and `out` must be valid pointers.
enum HbarStatus hbar_black_hole_gravitational_radius(const struct HbarBlackHole *bh, double *out);

// Horizon area in square meters.
//
// # Safety
// `bh` and `out` must be valid pointers.
enum HbarStatus hbar_black_hole_area(const struct HbarBlackHole *bh, double *out);

// `r* = r + ln(r - 1)`.
//
// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_tortoise(double r, double *out);

// Radius with tortoise coordinate `r_star`.
//
// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_tortoise_inverse(double r_star, double *out);

// Closed-form excitation probability; `atom_dominant` drops the
// `(1 + 2 nu/omega)^-2` factor.
//
// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_excitation_closed_form(double omega,
                                            double nu,
                                            double g,
                                            bool atom_dominant,
                                            double *out);

// Excitation probability by regulated quadrature with default settings.
// Returns `NonConvergence` (with the outputs still written) when the
// extrapolation error exceeds the relative tolerance.
//
// # Safety
// `value` and `error` must be valid pointers.
enum HbarStatus hbar_excitation_numeric(double omega,
                                        double nu,
                                        double g,
                                        double *value,
                                        double *error);

// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_mode_rates(double omega,
                                double nu,
                                double g,
                                double injection_rate_r,
                                struct HbarModeRates *out);

// Thermal distribution at `xi`, truncated where the tail drops below
// `tail_tol`.
//
// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_steady_state(double xi, double tail_tol, struct HbarPopulations **out);

// # Safety
// `out` must be a valid pointer.
enum HbarStatus hbar_populations_vacuum(size_t n_max, struct HbarPopulations **out);

// Copy `len` probabilities from `p`.
//
// # Safety
// `p` must point to `len` doubles; `out` must be valid.
enum HbarStatus hbar_populations_from_array(const double *p,
                                            size_t len,
                                            struct HbarPopulations **out);

// Number of levels (`N + 1`); zero for NULL.
//
// # Safety
// `p` must be NULL or a valid handle.
size_t hbar_populations_len(const struct HbarPopulations *p);

// Copy the probabilities into `buf`, which must hold at least
// [`hbar_populations_len`] doubles.
//
// # Safety
// `buf` must point to `cap` writable doubles.
enum HbarStatus hbar_populations_copy(const struct HbarPopulations *p, double *buf, size_t cap);

// # Safety
// `p` and `out` must be valid pointers.
enum HbarStatus hbar_populations_mean(const struct HbarPopulations *p, double *out);

// Von Neumann entropy in units of `k_B`.
//
// # Safety
// `p` and `out` must be valid pointers.
enum HbarStatus hbar_populations_entropy(const struct HbarPopulations *p, double *out);

// # Safety
// `p` must come from this library and not be used afterwards.
void hbar_populations_free(struct HbarPopulations *p);

// Evolve `p0` for `t_final` under `rates` with default step control.
//
// # Safety
// All pointers must be valid.
enum HbarStatus hbar_evolve(const struct HbarPopulations *p0,
                            const struct HbarModeRates *rates,
                            double t_final,
                            struct HbarPopulations **out);

// Parse a TOML scenario.
//
// # Safety
// `toml` must be a NUL-terminated string; `out` must be valid.
enum HbarStatus hbar_scenario_parse(const char *toml, struct HbarScenario **out);

// Apply a `key=value` override. The scenario is unchanged on failure.
//
// # Safety
// `sc` must be a valid handle and `assignment` a NUL-terminated string.
enum HbarStatus hbar_scenario_set(struct HbarScenario *sc, const char *assignment);

// # Safety
// `sc` must come from this library and not be used afterwards.
void hbar_scenario_free(struct HbarScenario *sc);

// # Safety
// `sc` and `out` must be valid pointers.
enum HbarStatus hbar_scenario_run(const struct HbarScenario *sc,
                                  enum HbarStage stage,
                                  struct HbarReport **out);

// 0 when all checks pass, 2 otherwise; -1 for NULL.
//
// # Safety
// `r` must be NULL or a valid handle.
int hbar_report_exit_code(const struct HbarReport *r);

// Report as JSON. `*needed` receives the size including the terminating
// NUL; the text is written only if `cap` is large enough.
//
// # Safety
// `buf` must point to `cap` writable bytes (may be NULL when `cap` is 0);
// `needed` must be valid.
enum HbarStatus hbar_report_json(const struct HbarReport *r, char *buf, size_t cap, size_t *needed);

// Write the report's files into `dir` using the scenario's output settings.
//
// # Safety
// All pointers must be valid; `dir` NUL-terminated.
enum HbarStatus hbar_report_emit(const struct HbarReport *r,
                                 const struct HbarScenario *sc,
                                 const char *dir);

// # Safety
// `r` must come from this library and not be used afterwards.
void hbar_report_free(struct HbarReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HBAR_SIM_H */
