// milne - command-line front end for the amplitude-phase solver.
//
// Links the shared C API only. Every subcommand reads the model from a JSON
// config (--config), computes through the library, and emits one CSV or JSON
// document to --out (default stdout). Output is buffered and written in one
// piece, so a failing run leaves no partial file.
//
// Exit codes: 0 success, 1 configuration/CLI errors, 2 numerical failures.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "milne.h"

namespace {

struct ModelHandle {
  milne_model* m = nullptr;
  ~ModelHandle() { milne_model_free(m); }
};
struct SpectrumHandle {
  milne_spectrum* s = nullptr;
  ~SpectrumHandle() { milne_spectrum_free(s); }
};
struct AmpHandle {
  milne_ampphase* a = nullptr;
  ~AmpHandle() { milne_ampphase_free(a); }
};

[[noreturn]] void die_numeric(const std::string& where) {
  std::cerr << "milne: " << where << ": " << milne_last_error() << "\n";
  std::exit(2);
}

[[noreturn]] void die_config(const std::string& msg) {
  std::cerr << "milne: " << msg << "\n";
  std::exit(1);
}

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) die_config("cannot open output file: " + out_path);
  out << payload;
}

ModelHandle load_model(const std::string& config_path) {
  ModelHandle model;
  const auto rc = milne_model_create_from_file(config_path.c_str(), &model.m);
  if (rc != MILNE_OK)
    die_config("config error (" + config_path + "): " + milne_last_error());
  return model;
}

SpectrumHandle solve_spectrum(const ModelHandle& model, int n_max) {
  SpectrumHandle sp;
  if (milne_model_solve_spectrum(model.m, n_max, &sp.s) != MILNE_OK)
    die_numeric("spectrum");
  return sp;
}

void warn_if_thin_buffer(const ModelHandle& model, double E) {
  double lr[2] = {0, 0};
  if (milne_model_buffer_efolds(model.m, E, lr) != MILNE_OK) return;
  if (lr[0] < 5.0 || lr[1] < 5.0)
    std::cerr << "milne: warning: forbidden-region buffer is thin ("
              << lr[0] << ", " << lr[1]
              << " e-folds); enlarge the grid for reliable boundaries\n";
}

AmpHandle compute_amp(const ModelHandle& model, const SpectrumHandle& sp,
                      double E, milne_c_policy policy, double c_value) {
  AmpHandle amp;
  if (milne_ampphase_compute(model.m, sp.s, E, policy, c_value, &amp.a) !=
      MILNE_OK)
    die_numeric("amplitude-phase");
  return amp;
}

milne_c_policy parse_policy(const std::string& name) {
  if (name == "co") return MILNE_C_NONOSC;
  if (name == "minus_co") return MILNE_C_MINUS_NONOSC;
  if (name == "of_energy") return MILNE_C_OF_ENERGY;
  if (name == "fixed") return MILNE_C_FIXED;
  die_config("unknown c-policy: " + name +
             " (expected co|minus_co|of_energy|fixed)");
}

const double* field_of(const AmpHandle& amp, milne_field f, size_t* n) {
  const double* data = nullptr;
  if (milne_ampphase_field(amp.a, f, &data, n) != MILNE_OK)
    die_numeric("field access");
  return data;
}

int worker_count() {
  if (const char* env = std::getenv("MILNE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

// deterministic fan-out: results land in preallocated slots
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = std::size_t(w); i < count; i += std::size_t(workers))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

// ---- subcommands ----

int cmd_eigen(const std::string& config, const std::string& out, int nmax) {
  auto model = load_model(config);
  auto sp = solve_spectrum(model, nmax);
  nlohmann::ordered_json doc;
  doc["eigenvalues"] = nlohmann::ordered_json::array();
  for (int k = 0; k < milne_spectrum_count(sp.s); ++k)
    doc["eigenvalues"].push_back(
        {{"n", k}, {"E", milne_spectrum_energy(sp.s, k)}});
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_ampphase(const std::string& config, const std::string& out, double E,
                 const std::string& policy_name, double c_value) {
  auto model = load_model(config);
  warn_if_thin_buffer(model, E);
  auto sp = solve_spectrum(model, 14);
  auto amp = compute_amp(model, sp, E, parse_policy(policy_name), c_value);
  size_t n = 0;
  const double* x = field_of(amp, MILNE_FIELD_X, &n);
  const double* u1 = field_of(amp, MILNE_FIELD_U1, &n);
  const double* u2 = field_of(amp, MILNE_FIELD_U2, &n);
  const double* alpha = field_of(amp, MILNE_FIELD_ALPHA, &n);
  const double* phi = field_of(amp, MILNE_FIELD_PHI, &n);
  const double* dphi = field_of(amp, MILNE_FIELD_DPHI, &n);
  std::ostringstream csv;
  csv << "x,u1,u2,alpha,phi,dphi\n";
  for (size_t i = 0; i < n; ++i)
    csv << format_num(x[i]) << ',' << format_num(u1[i]) << ','
        << format_num(u2[i]) << ',' << format_num(alpha[i]) << ','
        << format_num(phi[i]) << ',' << format_num(dphi[i]) << '\n';
  write_output(out, csv.str());
  return 0;
}

int cmd_scan_phase(const std::string& config, const std::string& out,
                   double nmin, double nmax, int steps) {
  if (steps < 2) die_config("scan-phase: need at least 2 steps");
  auto model = load_model(config);
  auto sp = solve_spectrum(model, int(std::ceil(nmax)) + 2);
  struct Row {
    double E, nE, phi_over_pi, c_used;
  };
  std::vector<Row> rows(static_cast<std::size_t>(steps));
  std::vector<std::string> errors(static_cast<std::size_t>(steps));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double nE = nmin + (nmax - nmin) * double(i) / double(steps - 1);
    double E = 0;
    if (milne_spectrum_energy_at(sp.s, nE, &E) != MILNE_OK) {
      errors[i] = milne_last_error();
      return;
    }
    AmpHandle amp;
    if (milne_ampphase_compute(model.m, sp.s, E, MILNE_C_OF_ENERGY, 0.0,
                               &amp.a) != MILNE_OK) {
      errors[i] = milne_last_error();
      return;
    }
    rows[i] = {E, nE, milne_ampphase_phi_total(amp.a) / M_PI,
               milne_ampphase_c_used(amp.a)};
  });
  for (const auto& e : errors)
    if (!e.empty()) {
      std::cerr << "milne: scan-phase: " << e << "\n";
      return 2;
    }
  std::ostringstream csv;
  csv << "E,nE,phi_total_over_pi,c_used\n";
  for (const auto& r : rows)
    csv << format_num(r.E) << ',' << format_num(r.nE) << ','
        << format_num(r.phi_over_pi) << ',' << format_num(r.c_used) << '\n';
  write_output(out, csv.str());
  return 0;
}

int cmd_action(const std::string& config, const std::string& out, double E) {
  auto model = load_model(config);
  auto sp = solve_spectrum(model, 14);
  double vals[4] = {0, 0, 0, 0};
  if (milne_action(model.m, sp.s, E, vals) != MILNE_OK) die_numeric("action");
  nlohmann::ordered_json doc;
  doc["E"] = E;
  doc["n_of_E"] = vals[3];
  doc["J_classical"] = vals[0];
  doc["J_quantal_co"] = vals[1];
  doc["period"] = vals[2];
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_fig1(const std::string& config, const std::string& out) {
  auto model = load_model(config);
  auto sp = solve_spectrum(model, 6);
  double E = 0;
  if (milne_spectrum_energy_at(sp.s, 4.4, &E) != MILNE_OK)
    die_numeric("fig1 energy");
  auto smooth = compute_amp(model, sp, E, MILNE_C_NONOSC, 0.0);
  auto rough = compute_amp(model, sp, E, MILNE_C_MINUS_NONOSC, 0.0);
  size_t n = 0, n2 = 0;
  const double* x = field_of(smooth, MILNE_FIELD_X, &n);
  const double* q = field_of(smooth, MILNE_FIELD_Q, &n);
  const double* a_co = field_of(smooth, MILNE_FIELD_ALPHA, &n);
  const double* a_mc = field_of(rough, MILNE_FIELD_ALPHA, &n2);
  std::ostringstream csv;
  csv << "x,Q_co,alpha_co,alpha_minus_co\n";
  for (size_t i = 0; i < std::min(n, n2); ++i)
    csv << format_num(x[i]) << ',' << format_num(q[i]) << ','
        << format_num(a_co[i]) << ',' << format_num(a_mc[i]) << '\n';
  // marker rows: the refined zeros of u1 and u2, with all columns
  // interpolated at the zero (Q takes the shared constant 2I/W^2 there)
  auto interp6 = [&](const double* ys, double xq) {
    size_t c = 0;
    while (c + 1 < n && x[c + 1] <= xq) ++c;
    c = std::min(std::max<size_t>(c, 3), n - 3) - 3;
    double px[6], py[6];
    for (int j = 0; j < 6; ++j) {
      px[j] = x[c + size_t(j)];
      py[j] = ys[c + size_t(j)];
    }
    for (int k = 1; k < 6; ++k)
      for (int i = 0; i + k < 6; ++i)
        py[i] = ((xq - px[i + k]) * py[i] + (px[i] - xq) * py[i + 1]) /
                (px[i] - px[i + k]);
    return py[0];
  };
  for (int which : {1, 2}) {
    double zeros[64];
    size_t count = 0;
    if (milne_ampphase_zeros(smooth.a, which, zeros, 64, &count) != MILNE_OK)
      die_numeric("fig1 zeros");
    for (size_t k = 0; k < std::min<size_t>(count, 64); ++k)
      csv << format_num(zeros[k]) << ',' << format_num(interp6(q, zeros[k]))
          << ',' << format_num(interp6(a_co, zeros[k])) << ','
          << format_num(interp6(a_mc, zeros[k])) << '\n';
  }
  write_output(out, csv.str());
  return 0;
}

int cmd_fig2(const std::string& config, const std::string& out) {
  auto model = load_model(config);
  auto sp = solve_spectrum(model, 14);
  double E = 0;
  if (milne_spectrum_energy_at(sp.s, 12.2, &E) != MILNE_OK)
    die_numeric("fig2 energy");
  warn_if_thin_buffer(model, E);
  auto smooth = compute_amp(model, sp, E, MILNE_C_NONOSC, 0.0);
  auto rough = compute_amp(model, sp, E, MILNE_C_FIXED, 0.0);
  const double hbar = milne_model_hbar(model.m);
  size_t n = 0, n2 = 0;
  const double* x = field_of(smooth, MILNE_FIELD_X, &n);
  const double* p = field_of(smooth, MILNE_FIELD_P_CLASSICAL, &n);
  const double* d_co = field_of(smooth, MILNE_FIELD_DPHI, &n);
  const double* d_g = field_of(rough, MILNE_FIELD_DPHI, &n2);
  std::ostringstream csv;
  csv << "x,p_classical,hbar_dphi_co,hbar_dphi_generic\n";
  for (size_t i = 0; i < std::min(n, n2); ++i)
    csv << format_num(x[i]) << ',' << format_num(p[i]) << ','
        << format_num(hbar * d_co[i]) << ',' << format_num(hbar * d_g[i])
        << '\n';
  write_output(out, csv.str());
  return 0;
}

int cmd_expand(const std::string& config, const std::string& out, double E,
               int order, double hbar_eff) {
  auto model = load_model(config);
  milne_expansion* e = nullptr;
  if (milne_expansion_compute(model.m, E, hbar_eff, order, &e) != MILNE_OK)
    die_numeric("expand");
  std::unique_ptr<milne_expansion, void (*)(milne_expansion*)> guard(
      e, milne_expansion_free);
  auto field = [&](milne_exp_field f, size_t* n) {
    const double* data = nullptr;
    if (milne_expansion_field(e, f, &data, n) != MILNE_OK)
      die_numeric("expand field");
    return data;
  };
  size_t n = 0;
  const double* x = field(MILNE_EXP_X, &n);
  const double* a0 = field(MILNE_EXP_A0, &n);
  const double* f0 = field(MILNE_EXP_F0, &n);
  const double* f2 = field(MILNE_EXP_F2, &n);
  const double* a2 = field(MILNE_EXP_A2, &n);
  const double* r0 = field(MILNE_EXP_RESID0, &n);
  const double* r2 = field(MILNE_EXP_RESID2, &n);
  std::ostringstream csv;
  csv << "x,a0,f0,f2,a2,residual_order0,residual_order2\n";
  for (size_t i = 0; i < n; ++i)
    csv << format_num(x[i]) << ',' << format_num(a0[i]) << ','
        << format_num(f0[i]) << ',' << format_num(f2[i]) << ','
        << format_num(a2[i]) << ',' << format_num(r0[i]) << ','
        << format_num(r2[i]) << '\n';
  write_output(out, csv.str());
  return 0;
}

int cmd_check(const std::string& config, const std::string& out) {
  auto model = load_model(config);
  milne_report* rep = nullptr;
  if (milne_check_run(model.m, &rep) != MILNE_OK) die_numeric("check");
  std::unique_ptr<milne_report, void (*)(milne_report*)> guard(
      rep, milne_report_free);
  std::ostringstream table;
  int failed = 0;
  for (int i = 0; i < milne_report_count(rep); ++i) {
    const int state = milne_report_state(rep, i);
    const char* verdict = state == 1 ? "PASS" : (state == 0 ? "FAIL" : "SKIP");
    if (state == 0) ++failed;
    char line[256];
    if (state >= 0)
      std::snprintf(line, sizeof line, "%-4s %-32s %11.4e <= %9.2e  %s\n",
                    verdict, milne_report_name(rep, i),
                    milne_report_measured(rep, i),
                    milne_report_threshold(rep, i),
                    milne_report_detail(rep, i));
    else
      std::snprintf(line, sizeof line, "%-4s %-32s %s\n", verdict,
                    milne_report_name(rep, i), milne_report_detail(rep, i));
    table << line;
  }
  table << (failed == 0 ? "all checks passed\n"
                        : std::to_string(failed) + " check(s) failed\n");
  write_output(out, table.str());
  if (failed != 0) {
    std::cerr << "milne: check: " << failed << " invariant(s) failed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amplitude-phase (Milne) solutions of the one-dimensional "
               "Schrodinger equation on single-minimum wells"};
  app.require_subcommand(1);

  std::string config, out = "-", policy = "co";
  double energy = 0.0, c_value = 0.0, nmin = 0.6, nmax = 6.4, hbar_eff = 1.0;
  int steps = 30, n_max = 5, order = 2;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON model configuration")
        ->required();
    cmd->add_option("--out", out, "output path (default: stdout)");
  };

  auto* eigen = app.add_subcommand("eigen", "eigenvalue list as JSON");
  add_common(eigen);
  eigen->add_option("--nmax", n_max, "highest quantum number");

  auto* amp = app.add_subcommand("ampphase",
                                 "basis and amplitude-phase arrays as CSV");
  add_common(amp);
  amp->add_option("--energy", energy, "energy E")->required();
  amp->add_option("--c-policy", policy, "co|minus_co|of_energy|fixed");
  amp->add_option("--c-value", c_value, "value used with --c-policy fixed");

  auto* scan = app.add_subcommand("scan-phase",
                                  "accumulated phase across energies as CSV");
  add_common(scan);
  scan->add_option("--nmin", nmin, "first quantum number");
  scan->add_option("--nmax", nmax, "last quantum number");
  scan->add_option("--steps", steps, "number of scan points");

  auto* action = app.add_subcommand("action", "action integrals as JSON");
  add_common(action);
  action->add_option("--energy", energy, "energy E")->required();

  auto* fig1 = app.add_subcommand(
      "fig1", "Q and the two amplitude branches at n(E)=4.4 as CSV");
  add_common(fig1);

  auto* fig2 = app.add_subcommand(
      "fig2", "classical vs quantal momentum at n(E)=12.2 as CSV");
  add_common(fig2);

  auto* expand = app.add_subcommand("expand",
                                    "small-hbar expansion terms as CSV");
  add_common(expand);
  expand->add_option("--energy", energy, "energy E")->required();
  expand->add_option("--order", order, "truncation order (0 or 2)");
  expand->add_option("--hbar-eff", hbar_eff, "effective hbar");

  auto* check = app.add_subcommand("check", "run the full invariant suite");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "milne: " << e.what() << "\n";
    return 1;
  }

  if (eigen->parsed()) return cmd_eigen(config, out, n_max);
  if (amp->parsed()) return cmd_ampphase(config, out, energy, policy, c_value);
  if (scan->parsed()) return cmd_scan_phase(config, out, nmin, nmax, steps);
  if (action->parsed()) return cmd_action(config, out, energy);
  if (fig1->parsed()) return cmd_fig1(config, out);
  if (fig2->parsed()) return cmd_fig2(config, out);
  if (expand->parsed()) return cmd_expand(config, out, energy, order, hbar_eff);
  if (check->parsed()) return cmd_check(config, out);
  return 1;
}
