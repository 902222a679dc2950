// Exercises the shared-library C surface end to end: model lifecycle,
// spectrum, amplitude-phase fields, action integrals, expansion terms, the
// report, and the error paths. Links against libmilne only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "milne.h"

namespace {

const char* kHarmonicJson = R"({
  "potential": {"type": "harmonic", "m": 1.0, "omega": 1.0},
  "grid": {"xmin": -12.0, "xmax": 12.0, "n": 4001},
  "hbar": 1.0
})";

struct Model {
  milne_model* m = nullptr;
  Model() {
    REQUIRE(milne_model_create_from_json(kHarmonicJson, ".", &m) == MILNE_OK);
  }
  ~Model() { milne_model_free(m); }
};

}  // namespace

TEST_CASE("model creation and introspection") {
  Model model;
  CHECK(milne_model_grid_points(model.m) == 4001);
  CHECK(milne_model_grid_xmin(model.m) == -12.0);
  CHECK(milne_model_hbar(model.m) == 1.0);
  double lr[2] = {0, 0};
  CHECK(milne_model_buffer_efolds(model.m, 4.9, lr) == MILNE_OK);
  CHECK(lr[0] > 5.0);
  CHECK(lr[1] > 5.0);

  milne_model* bad = nullptr;
  CHECK(milne_model_create_from_json("{", ".", &bad) == MILNE_ERR_CONFIG);
  CHECK(std::strlen(milne_last_error()) > 0);
  CHECK(milne_model_create_from_file("/nonexistent.json", &bad) ==
        MILNE_ERR_CONFIG);
}

TEST_CASE("spectrum handle") {
  Model model;
  milne_spectrum* sp = nullptr;
  REQUIRE(milne_model_solve_spectrum(model.m, 5, &sp) == MILNE_OK);
  CHECK(milne_spectrum_count(sp) == 6);
  for (int k = 0; k <= 5; ++k)
    CHECK(milne_spectrum_energy(sp, k) == doctest::Approx(k + 0.5).epsilon(1e-8));
  double n = 0;
  CHECK(milne_spectrum_quantum_number(sp, 4.9, &n) == MILNE_OK);
  CHECK(n == doctest::Approx(4.4));
  double E = 0;
  CHECK(milne_spectrum_energy_at(sp, 4.4, &E) == MILNE_OK);
  CHECK(E == doctest::Approx(4.9));
  milne_spectrum_free(sp);
}

TEST_CASE("amplitude-phase handle and fields") {
  Model model;
  milne_spectrum* sp = nullptr;
  REQUIRE(milne_model_solve_spectrum(model.m, 6, &sp) == MILNE_OK);

  milne_ampphase* ap = nullptr;
  REQUIRE(milne_ampphase_compute(model.m, sp, 4.9, MILNE_C_NONOSC, 0.0, &ap) ==
          MILNE_OK);
  const double* x = nullptr;
  const double* alpha = nullptr;
  const double* dphi = nullptr;
  size_t n = 0, n2 = 0, n3 = 0;
  REQUIRE(milne_ampphase_field(ap, MILNE_FIELD_X, &x, &n) == MILNE_OK);
  REQUIRE(milne_ampphase_field(ap, MILNE_FIELD_ALPHA, &alpha, &n2) == MILNE_OK);
  REQUIRE(milne_ampphase_field(ap, MILNE_FIELD_DPHI, &dphi, &n3) == MILNE_OK);
  REQUIRE(n == n2);
  REQUIRE(n == n3);
  REQUIRE(n > 100);
  for (size_t i = 0; i < n; ++i) {
    CHECK(alpha[i] > 0);
    CHECK(std::abs(alpha[i] * alpha[i] * dphi[i] - 1.0) < 1e-12);
  }
  CHECK(milne_ampphase_stationary_count(ap) == 1);
  CHECK(milne_ampphase_quantum_number(ap) == doctest::Approx(4.4));
  CHECK(milne_ampphase_phi_total(ap) ==
        doctest::Approx(5.4 * M_PI).epsilon(1e-6));

  double zeros[32];
  size_t count = 0;
  REQUIRE(milne_ampphase_zeros(ap, 1, zeros, 32, &count) == MILNE_OK);
  CHECK(count == 5);
  REQUIRE(milne_ampphase_zeros(ap, 2, zeros, 32, &count) == MILNE_OK);
  CHECK(count == 5);
  CHECK(milne_ampphase_zeros(ap, 3, zeros, 32, &count) ==
        MILNE_ERR_BAD_ARGUMENT);
  milne_ampphase_free(ap);

  // degenerate request: c(E) at an eigenvalue
  milne_ampphase* bad = nullptr;
  CHECK(milne_ampphase_compute(model.m, sp, 3.5, MILNE_C_OF_ENERGY, 0.0,
                               &bad) == MILNE_ERR_EIGENVALUE_DEGENERATE);
  // energy beyond the grid's potential at the edges
  CHECK(milne_ampphase_compute(model.m, sp, 80.0, MILNE_C_NONOSC, 0.0, &bad) ==
        MILNE_ERR_ENERGY_OUT_OF_RANGE);
  milne_spectrum_free(sp);
}

TEST_CASE("action integrals through the C surface") {
  Model model;
  milne_spectrum* sp = nullptr;
  REQUIRE(milne_model_solve_spectrum(model.m, 6, &sp) == MILNE_OK);
  double out[4] = {0, 0, 0, 0};
  REQUIRE(milne_action(model.m, sp, 4.9, out) == MILNE_OK);
  CHECK(out[0] == doctest::Approx(2 * M_PI * 4.9).epsilon(1e-6));
  CHECK(out[1] == doctest::Approx(2 * M_PI * 5.4).epsilon(1e-4));
  CHECK(out[2] == doctest::Approx(2 * M_PI).epsilon(1e-6));
  CHECK(out[3] == doctest::Approx(4.4));
  milne_spectrum_free(sp);
}

TEST_CASE("expansion handle") {
  Model model;
  milne_expansion* e = nullptr;
  REQUIRE(milne_expansion_compute(model.m, 4.9, 1.0, 2, &e) == MILNE_OK);
  const double* r0 = nullptr;
  const double* r2 = nullptr;
  size_t n = 0;
  REQUIRE(milne_expansion_field(e, MILNE_EXP_RESID0, &r0, &n) == MILNE_OK);
  REQUIRE(milne_expansion_field(e, MILNE_EXP_RESID2, &r2, &n) == MILNE_OK);
  double m0 = 0, m2 = 0;
  for (size_t i = n / 4; i < 3 * n / 4; ++i) {  // away from the caustic trim
    m0 = std::max(m0, std::abs(r0[i]));
    m2 = std::max(m2, std::abs(r2[i]));
  }
  CHECK(m2 < m0);  // the order-2 terms reduce the equation residual
  milne_expansion_free(e);
  CHECK(milne_expansion_compute(model.m, 4.9, -1.0, 2, &e) ==
        MILNE_ERR_BAD_ARGUMENT);
}

TEST_CASE("report through the C surface") {
  Model model;
  milne_report* rep = nullptr;
  REQUIRE(milne_check_run(model.m, &rep) == MILNE_OK);
  REQUIRE(milne_report_count(rep) >= 25);
  int failed = 0;
  for (int i = 0; i < milne_report_count(rep); ++i) {
    if (milne_report_state(rep, i) == 0) ++failed;
    CHECK(std::strlen(milne_report_name(rep, i)) > 0);
  }
  CHECK(failed == 0);
  milne_report_free(rep);
}

TEST_CASE("version and null-safety") {
  CHECK(std::strlen(milne_version()) > 0);
  CHECK(milne_model_create_from_file(nullptr, nullptr) ==
        MILNE_ERR_BAD_ARGUMENT);
  CHECK(milne_model_grid_points(nullptr) == 0);
  CHECK(milne_report_count(nullptr) == 0);
}
