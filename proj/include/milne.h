/* milne.h - C interface to the amplitude-phase (Milne) solver library.
 *
 * All entry points return milne_status (MILNE_OK on success). On failure a
 * diagnostic is available from milne_last_error() (thread-local). Objects
 * are opaque handles released with the matching *_free function.
 */
#ifndef MILNE_H
#define MILNE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  MILNE_OK = 0,
  MILNE_ERR_CONFIG = 1,
  MILNE_ERR_ENERGY_OUT_OF_RANGE = 2,
  MILNE_ERR_NO_MINIMUM = 3,
  MILNE_ERR_DEGENERATE_TURNING_POINTS = 4,
  MILNE_ERR_NON_FINITE_INPUT = 5,
  MILNE_ERR_OVERFLOW = 6,
  MILNE_ERR_INCONSISTENT_WRONSKIAN = 7,
  MILNE_ERR_EIGENVALUE_DEGENERATE = 8,
  MILNE_ERR_NEGATIVE_QUADRATIC_FORM = 9,
  MILNE_ERR_PHASE_UNWRAP_MISMATCH = 10,
  MILNE_ERR_RECONSTRUCTION_MISMATCH = 11,
  MILNE_ERR_INVERTED_MISMATCH = 12,
  MILNE_ERR_BAND_UNDEFINED = 13,
  MILNE_ERR_ARCCOS_DOMAIN = 14,
  MILNE_ERR_DERIVATIVE_VANISHES = 15,
  MILNE_ERR_BRACKET_NOT_FOUND = 16,
  MILNE_ERR_OUT_OF_RANGE = 17,
  MILNE_ERR_REALITY_VIOLATED = 18,
  MILNE_ERR_INTERNAL = 19,
  MILNE_ERR_BAD_ARGUMENT = 20
} milne_status;

typedef struct milne_model milne_model;
typedef struct milne_spectrum milne_spectrum;
typedef struct milne_ampphase milne_ampphase;
typedef struct milne_expansion milne_expansion;
typedef struct milne_report milne_report;

const char* milne_version(void);
/* Thread-local message describing the most recent failure. */
const char* milne_last_error(void);

/* ---- model: potential + grid + hbar (JSON configuration) ---- */

milne_status milne_model_create_from_file(const char* path, milne_model** out);
milne_status milne_model_create_from_json(const char* json_text,
                                          const char* base_dir,
                                          milne_model** out);
void milne_model_free(milne_model* model);

size_t milne_model_grid_points(const milne_model* model);
double milne_model_grid_xmin(const milne_model* model);
double milne_model_grid_xmax(const milne_model* model);
double milne_model_hbar(const milne_model* model);
/* Forbidden-region depth at energy E, in e-foldings, left and right of the
 * well; values below 5 indicate an under-sized grid. */
milne_status milne_model_buffer_efolds(const milne_model* model, double E,
                                       double out_left_right[2]);

/* ---- spectrum: eigenvalues and the quantum-number continuation ---- */

milne_status milne_model_solve_spectrum(const milne_model* model, int n_max,
                                        milne_spectrum** out);
void milne_spectrum_free(milne_spectrum* spectrum);
int milne_spectrum_count(const milne_spectrum* spectrum);
double milne_spectrum_energy(const milne_spectrum* spectrum, int k);
milne_status milne_spectrum_quantum_number(const milne_spectrum* spectrum,
                                           double E, double* n_out);
milne_status milne_spectrum_energy_at(const milne_spectrum* spectrum,
                                      double n_real, double* E_out);

/* ---- amplitude-phase solution at one energy ---- */

typedef enum {
  MILNE_C_NONOSC = 0,        /* the non-oscillating branch of +-c_o */
  MILNE_C_MINUS_NONOSC = 1,  /* the oscillating branch */
  MILNE_C_OF_ENERGY = 2,     /* c(E) from the smooth energy normalization */
  MILNE_C_FIXED = 3          /* caller-supplied value */
} milne_c_policy;

typedef enum {
  MILNE_FIELD_X = 0,
  MILNE_FIELD_U1 = 1,
  MILNE_FIELD_U2 = 2,
  MILNE_FIELD_ALPHA = 3,
  MILNE_FIELD_PHI = 4,
  MILNE_FIELD_DPHI = 5,
  MILNE_FIELD_Q = 6,
  MILNE_FIELD_P_CLASSICAL = 7
} milne_field;

milne_status milne_ampphase_compute(const milne_model* model,
                                    const milne_spectrum* spectrum, double E,
                                    milne_c_policy policy, double c_fixed,
                                    milne_ampphase** out);
void milne_ampphase_free(milne_ampphase* ap);
/* Borrowed pointer into the handle; valid until the handle is freed. */
milne_status milne_ampphase_field(const milne_ampphase* ap, milne_field field,
                                  const double** data, size_t* len);
double milne_ampphase_c_used(const milne_ampphase* ap);
double milne_ampphase_phi_total(const milne_ampphase* ap);
double milne_ampphase_quantum_number(const milne_ampphase* ap);
int milne_ampphase_stationary_count(const milne_ampphase* ap);
/* which = 1 or 2; writes up to cap refined zero locations. */
milne_status milne_ampphase_zeros(const milne_ampphase* ap, int which,
                                  double* buf, size_t cap, size_t* count);

/* ---- action integrals ----
 * out[0] = J_classical, out[1] = J_quantal at c(E), out[2] = period,
 * out[3] = n(E). */
milne_status milne_action(const milne_model* model,
                          const milne_spectrum* spectrum, double E,
                          double out[4]);

/* ---- small-hbar expansion (order 0 or 2) ---- */

typedef enum {
  MILNE_EXP_X = 0,
  MILNE_EXP_A0 = 1,
  MILNE_EXP_F0 = 2,
  MILNE_EXP_F2 = 3,
  MILNE_EXP_A2 = 4,
  MILNE_EXP_RESID0 = 5, /* equation residual of the order-0 reconstruction */
  MILNE_EXP_RESID2 = 6  /* same for the order-2 reconstruction */
} milne_exp_field;

milne_status milne_expansion_compute(const milne_model* model, double E,
                                     double hbar_eff, int order,
                                     milne_expansion** out);
void milne_expansion_free(milne_expansion* e);
milne_status milne_expansion_field(const milne_expansion* e,
                                   milne_exp_field field,
                                   const double** data, size_t* len);

/* ---- invariant suite ---- */

milne_status milne_check_run(const milne_model* model, milne_report** out);
void milne_report_free(milne_report* report);
int milne_report_count(const milne_report* report);
const char* milne_report_name(const milne_report* report, int i);
/* 1 = passed, 0 = failed, -1 = skipped */
int milne_report_state(const milne_report* report, int i);
double milne_report_measured(const milne_report* report, int i);
double milne_report_threshold(const milne_report* report, int i);
const char* milne_report_detail(const milne_report* report, int i);

#ifdef __cplusplus
}
#endif

#endif /* MILNE_H */
