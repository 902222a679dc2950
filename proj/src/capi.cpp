#include "milne.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "milne/checks.hpp"
#include "milne/config.hpp"
#include "milne/ermakov.hpp"
#include "milne/errors.hpp"
#include "milne/schrodinger.hpp"
#include "milne/semiclassical.hpp"
#include "milne/spectral.hpp"

namespace {

thread_local std::string g_last_error;

milne_status map_code(milne::ErrorCode code) {
  using EC = milne::ErrorCode;
  switch (code) {
    case EC::config_invalid: return MILNE_ERR_CONFIG;
    case EC::energy_out_of_range: return MILNE_ERR_ENERGY_OUT_OF_RANGE;
    case EC::no_minimum: return MILNE_ERR_NO_MINIMUM;
    case EC::degenerate_turning_points:
      return MILNE_ERR_DEGENERATE_TURNING_POINTS;
    case EC::non_finite_input: return MILNE_ERR_NON_FINITE_INPUT;
    case EC::overflow: return MILNE_ERR_OVERFLOW;
    case EC::inconsistent_wronskian: return MILNE_ERR_INCONSISTENT_WRONSKIAN;
    case EC::eigenvalue_degenerate: return MILNE_ERR_EIGENVALUE_DEGENERATE;
    case EC::negative_quadratic_form: return MILNE_ERR_NEGATIVE_QUADRATIC_FORM;
    case EC::phase_unwrap_mismatch: return MILNE_ERR_PHASE_UNWRAP_MISMATCH;
    case EC::reconstruction_mismatch: return MILNE_ERR_RECONSTRUCTION_MISMATCH;
    case EC::inverted_mismatch: return MILNE_ERR_INVERTED_MISMATCH;
    case EC::band_undefined: return MILNE_ERR_BAND_UNDEFINED;
    case EC::arccos_domain: return MILNE_ERR_ARCCOS_DOMAIN;
    case EC::derivative_vanishes: return MILNE_ERR_DERIVATIVE_VANISHES;
    case EC::bracket_not_found: return MILNE_ERR_BRACKET_NOT_FOUND;
    case EC::out_of_range: return MILNE_ERR_OUT_OF_RANGE;
    case EC::reality_violated: return MILNE_ERR_REALITY_VIOLATED;
    case EC::internal: return MILNE_ERR_INTERNAL;
  }
  return MILNE_ERR_INTERNAL;
}

template <typename Fn>
milne_status guarded(Fn&& fn) {
  try {
    fn();
    return MILNE_OK;
  } catch (const milne::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MILNE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MILNE_ERR_INTERNAL;
  }
}

milne_status bad_argument(const char* what) {
  g_last_error = what;
  return MILNE_ERR_BAD_ARGUMENT;
}

}  // namespace

struct milne_model {
  milne::RunConfig config;
};

struct milne_spectrum {
  milne::QuantumNumberMap map;
};

struct milne_ampphase {
  std::vector<double> x, u1, u2, alpha, phi, dphi, q, p;
  std::vector<double> zeros_u1, zeros_u2;
  double c_used = 0.0;
  double phi_total = 0.0;
  double n_of_E = 0.0;
  int stationary = 0;
};

struct milne_expansion {
  std::vector<double> x, a0, f0, f2, a2, resid0, resid2;
};

struct milne_report {
  std::vector<milne::CheckResult> results;
};

extern "C" {

const char* milne_version(void) { return "0.1.0"; }

const char* milne_last_error(void) { return g_last_error.c_str(); }

milne_status milne_model_create_from_file(const char* path,
                                          milne_model** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] {
    auto model = new milne_model{milne::load_config_file(path)};
    *out = model;
  });
}

milne_status milne_model_create_from_json(const char* json_text,
                                          const char* base_dir,
                                          milne_model** out) {
  if (!json_text || !out) return bad_argument("null argument");
  return guarded([&] {
    auto model = new milne_model{
        milne::load_config_json(json_text, base_dir ? base_dir : ".")};
    *out = model;
  });
}

void milne_model_free(milne_model* model) { delete model; }

size_t milne_model_grid_points(const milne_model* model) {
  return model ? model->config.grid.n_points : 0;
}
double milne_model_grid_xmin(const milne_model* model) {
  return model ? model->config.grid.x_min : 0.0;
}
double milne_model_grid_xmax(const milne_model* model) {
  return model ? model->config.grid.x_max : 0.0;
}
double milne_model_hbar(const milne_model* model) {
  return model ? model->config.potential.hbar() : 0.0;
}

milne_status milne_model_buffer_efolds(const milne_model* model, double E,
                                       double out_left_right[2]) {
  if (!model || !out_left_right) return bad_argument("null argument");
  return guarded([&] {
    const auto slice =
        milne::evaluate_energy_slice(model->config.potential,
                                     model->config.grid, E);
    out_left_right[0] = slice.buffer_efolds_left;
    out_left_right[1] = slice.buffer_efolds_right;
  });
}

milne_status milne_model_solve_spectrum(const milne_model* model, int n_max,
                                        milne_spectrum** out) {
  if (!model || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new milne_spectrum{milne::find_eigenvalues(
        model->config.potential, model->config.grid, n_max)};
  });
}

void milne_spectrum_free(milne_spectrum* spectrum) { delete spectrum; }

int milne_spectrum_count(const milne_spectrum* spectrum) {
  return spectrum ? int(spectrum->map.eigenvalues().size()) : 0;
}

double milne_spectrum_energy(const milne_spectrum* spectrum, int k) {
  if (!spectrum || k < 0 || k >= int(spectrum->map.eigenvalues().size()))
    return std::nan("");
  return spectrum->map.eigenvalues()[std::size_t(k)];
}

milne_status milne_spectrum_quantum_number(const milne_spectrum* spectrum,
                                           double E, double* n_out) {
  if (!spectrum || !n_out) return bad_argument("null argument");
  return guarded([&] { *n_out = spectrum->map.n_of(E); });
}

milne_status milne_spectrum_energy_at(const milne_spectrum* spectrum,
                                      double n_real, double* E_out) {
  if (!spectrum || !E_out) return bad_argument("null argument");
  return guarded([&] { *E_out = spectrum->map.energy_at(n_real); });
}

milne_status milne_ampphase_compute(const milne_model* model,
                                    const milne_spectrum* spectrum, double E,
                                    milne_c_policy policy, double c_fixed,
                                    milne_ampphase** out) {
  if (!model || !spectrum || !out) return bad_argument("null argument");
  return guarded([&] {
    milne::CPolicy pol;
    switch (policy) {
      case MILNE_C_NONOSC: pol = milne::CPolicy::nonosc; break;
      case MILNE_C_MINUS_NONOSC: pol = milne::CPolicy::minus_nonosc; break;
      case MILNE_C_OF_ENERGY: pol = milne::CPolicy::of_energy; break;
      case MILNE_C_FIXED: pol = milne::CPolicy::fixed; break;
      default: milne::fail(milne::ErrorCode::config_invalid, "bad c policy");
    }
    const auto& grid = model->config.grid;
    const auto r = milne::run_amplitude_phase(
        model->config.potential, grid, spectrum->map, E, 1.0, pol, c_fixed);
    auto ap = std::make_unique<milne_ampphase>();
    const auto range = r.ap.range;
    ap->x.resize(range.size());
    ap->u1.resize(range.size());
    ap->u2.resize(range.size());
    ap->p.resize(range.size());
    for (std::size_t i = 0; i < range.size(); ++i) {
      const std::size_t gi = range.begin + i;
      ap->x[i] = grid.x(gi);
      ap->u1[i] = r.pair.u1[gi];
      ap->u2[i] = r.pair.u2[gi];
      ap->p[i] = r.slice.p(gi);
    }
    ap->alpha = r.ap.alpha;
    ap->phi = r.ap.phi;
    ap->dphi = r.ap.dphi;
    const auto q = milne::canonical_Q(grid, r.pair,
                                      milne::ErmakovParams{1.0, r.c_used},
                                      range);
    ap->q = q.q;
    ap->zeros_u1 = milne::basis_zeros(grid, r.slice, r.pair.u1);
    ap->zeros_u2 = milne::basis_zeros(grid, r.slice, r.pair.u2);
    ap->c_used = r.c_used;
    ap->phi_total = r.ap.phi_total;
    ap->n_of_E = r.n_of_E;
    ap->stationary = int(
        milne::stationary_points(grid, r.slice, r.ap.alpha, range).size());
    *out = ap.release();
  });
}

void milne_ampphase_free(milne_ampphase* ap) { delete ap; }

milne_status milne_ampphase_field(const milne_ampphase* ap, milne_field field,
                                  const double** data, size_t* len) {
  if (!ap || !data || !len) return bad_argument("null argument");
  const std::vector<double>* src = nullptr;
  switch (field) {
    case MILNE_FIELD_X: src = &ap->x; break;
    case MILNE_FIELD_U1: src = &ap->u1; break;
    case MILNE_FIELD_U2: src = &ap->u2; break;
    case MILNE_FIELD_ALPHA: src = &ap->alpha; break;
    case MILNE_FIELD_PHI: src = &ap->phi; break;
    case MILNE_FIELD_DPHI: src = &ap->dphi; break;
    case MILNE_FIELD_Q: src = &ap->q; break;
    case MILNE_FIELD_P_CLASSICAL: src = &ap->p; break;
  }
  if (!src) return bad_argument("unknown field");
  *data = src->data();
  *len = src->size();
  return MILNE_OK;
}

double milne_ampphase_c_used(const milne_ampphase* ap) {
  return ap ? ap->c_used : std::nan("");
}
double milne_ampphase_phi_total(const milne_ampphase* ap) {
  return ap ? ap->phi_total : std::nan("");
}
double milne_ampphase_quantum_number(const milne_ampphase* ap) {
  return ap ? ap->n_of_E : std::nan("");
}
int milne_ampphase_stationary_count(const milne_ampphase* ap) {
  return ap ? ap->stationary : -1;
}

milne_status milne_ampphase_zeros(const milne_ampphase* ap, int which,
                                  double* buf, size_t cap, size_t* count) {
  if (!ap || !buf || !count) return bad_argument("null argument");
  if (which != 1 && which != 2) return bad_argument("which must be 1 or 2");
  const auto& zs = which == 1 ? ap->zeros_u1 : ap->zeros_u2;
  *count = zs.size();
  const size_t n = std::min(cap, zs.size());
  std::memcpy(buf, zs.data(), n * sizeof(double));
  return MILNE_OK;
}

milne_status milne_action(const milne_model* model,
                          const milne_spectrum* spectrum, double E,
                          double out[4]) {
  if (!model || !spectrum || !out) return bad_argument("null argument");
  return guarded([&] {
    const auto act =
        milne::action_integrals(model->config.potential, model->config.grid,
                                spectrum->map, E, 1.0);
    out[0] = act.J_classical;
    out[1] = act.J_quantal_co;
    out[2] = act.period;
    out[3] = act.n_of_E;
  });
}

milne_status milne_expansion_compute(const milne_model* model, double E,
                                     double hbar_eff, int order,
                                     milne_expansion** out) {
  if (!model || !out) return bad_argument("null argument");
  if (hbar_eff <= 0) return bad_argument("hbar_eff must be > 0");
  return guarded([&] {
    const auto& grid = model->config.grid;
    const auto slice =
        milne::evaluate_energy_slice(model->config.potential, grid, E);
    const auto action = milne::reduced_action(grid, slice);
    const auto t2 = milne::hbar_expansion(grid, slice, action, hbar_eff,
                                          order >= 2 ? 2 : 0);
    auto e = std::make_unique<milne_expansion>();
    const std::size_t n = t2.a0.size();
    e->x.resize(n);
    for (std::size_t i = 0; i < n; ++i) e->x[i] = grid.x(t2.begin + i);
    e->a0 = t2.a0;
    e->f0 = t2.f0;
    if (t2.order >= 2) {
      e->f2 = t2.f2;
      e->a2 = t2.a2;
      e->resid2 = milne::expansion_residual(grid, slice, t2).residual;
    } else {
      e->f2.assign(n, 0.0);
      e->a2.assign(n, 0.0);
      e->resid2.assign(n, 0.0);
    }
    auto t0 = t2;
    t0.order = 0;
    e->resid0 = milne::expansion_residual(grid, slice, t0).residual;
    *out = e.release();
  });
}

void milne_expansion_free(milne_expansion* e) { delete e; }

milne_status milne_expansion_field(const milne_expansion* e,
                                   milne_exp_field field,
                                   const double** data, size_t* len) {
  if (!e || !data || !len) return bad_argument("null argument");
  const std::vector<double>* src = nullptr;
  switch (field) {
    case MILNE_EXP_X: src = &e->x; break;
    case MILNE_EXP_A0: src = &e->a0; break;
    case MILNE_EXP_F0: src = &e->f0; break;
    case MILNE_EXP_F2: src = &e->f2; break;
    case MILNE_EXP_A2: src = &e->a2; break;
    case MILNE_EXP_RESID0: src = &e->resid0; break;
    case MILNE_EXP_RESID2: src = &e->resid2; break;
  }
  if (!src) return bad_argument("unknown field");
  *data = src->data();
  *len = src->size();
  return MILNE_OK;
}

milne_status milne_check_run(const milne_model* model, milne_report** out) {
  if (!model || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new milne_report{
        milne::run_all_checks(model->config.potential, model->config.grid)};
  });
}

void milne_report_free(milne_report* report) { delete report; }

int milne_report_count(const milne_report* report) {
  return report ? int(report->results.size()) : 0;
}

const char* milne_report_name(const milne_report* report, int i) {
  if (!report || i < 0 || i >= int(report->results.size())) return "";
  return report->results[std::size_t(i)].name.c_str();
}

int milne_report_state(const milne_report* report, int i) {
  if (!report || i < 0 || i >= int(report->results.size())) return 0;
  const auto& r = report->results[std::size_t(i)];
  if (r.skipped) return -1;
  return r.passed ? 1 : 0;
}

double milne_report_measured(const milne_report* report, int i) {
  if (!report || i < 0 || i >= int(report->results.size())) return std::nan("");
  return report->results[std::size_t(i)].measured;
}

double milne_report_threshold(const milne_report* report, int i) {
  if (!report || i < 0 || i >= int(report->results.size())) return std::nan("");
  return report->results[std::size_t(i)].threshold;
}

const char* milne_report_detail(const milne_report* report, int i) {
  if (!report || i < 0 || i >= int(report->results.size())) return "";
  return report->results[std::size_t(i)].detail.c_str();
}

}  // extern "C"
