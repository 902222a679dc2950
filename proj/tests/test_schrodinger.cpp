#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "milne/errors.hpp"
#include "milne/ermakov.hpp"
#include "milne/schrodinger.hpp"
#include "support/reference.hpp"

using namespace milne;
using milne::testing::reference_grid;
using milne::testing::reference_potential;

namespace {

// slab harness: constant p^2 = 1 slice on an arbitrary grid (V = 0, E = 1/2,
// m = 1). Solutions of u'' = -u are sines from either wall.
EnergySlice slab_slice(const SpatialGrid& grid) {
  EnergySlice s;
  s.E = 0.5;
  s.hbar = 1.0;
  s.mass = 1.0;
  s.p_squared.assign(grid.n_points, 1.0);
  s.t1 = grid.x_min;
  s.t2 = grid.x_max;
  s.allowed_begin = 0;
  s.allowed_end = grid.n_points;
  return s;
}

double slab_sine_error(std::size_t n_points) {
  const SpatialGrid grid(0.0, M_PI * 3.0, n_points);
  const auto s = slab_slice(grid);
  const auto u = integrate_regular(grid, s, RegularEnd::left);
  // compare against sin(x) scaled to the same maximum
  double err = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i)
    err = std::max(err, std::abs(u.values[i] - std::sin(grid.x(i))));
  return err;
}

}  // namespace

TEST_CASE("slab march reproduces the sine; one-step error is O(h^6)") {
  // h = 0.005 run: global error below 1e-9 (the accumulated phase drift is
  // O(h^4) over a fixed interval, about 1.2e-11 here)
  const std::size_t n1 = std::size_t(M_PI * 3.0 / 0.005) | 1u;
  CHECK(slab_sine_error(n1) < 1e-9);

  // the local truncation order: one step seeded with exact sine values has
  // error h^6 k^6 sin(x)/240, so halving h gains 2^6 = 64 within +-30%.
  // h must be coarse enough to stay above the rounding floor.
  auto one_step_error = [](double h) {
    const double x0 = 1.0;
    const double w_prev = std::sin(x0 - h) * (1.0 + h * h / 12.0);
    const double w_cur = std::sin(x0) * (1.0 + h * h / 12.0);
    const double w_next = 2.0 * w_cur - w_prev - h * h * std::sin(x0);
    return std::abs(w_next / (1.0 + h * h / 12.0) - std::sin(x0 + h));
  };
  const double gain = one_step_error(0.1) / one_step_error(0.05);
  CHECK(gain > 0.7 * 64.0);
  CHECK(gain < 1.3 * 64.0);
}

TEST_CASE("harmonic ground state from the left march") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 0.5);
  const auto u = integrate_regular(grid, s, RegularEnd::left);
  // exact ground state exp(-x^2/2), matched at x = 0
  const std::size_t i0 = grid.upper_index(0.0) - 1;
  const double scale = u.values[i0] / std::exp(-0.5 * grid.x(i0) * grid.x(i0));
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    const std::size_t i = grid.upper_index(x) - 1;
    const double expect = scale * std::exp(-0.5 * grid.x(i) * grid.x(i));
    CHECK(u.values[i] == doctest::Approx(expect).epsilon(1e-7));
  }
  CHECK(u.node_count == 0);
}

TEST_CASE("node counts between the turning points") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 4.9);
  const auto u1 = integrate_regular(grid, s, RegularEnd::left);
  const auto u2 = integrate_regular(grid, s, RegularEnd::right);
  // between eigenvalues E_4 = 4.5 and E_5 = 5.5 both regular solutions carry
  // ceil(n(E)) = 5 interior nodes (the new node enters through the well edge
  // just above each eigenvalue)
  CHECK(u1.node_count == 5);
  CHECK(u2.node_count == 5);
  // oscillation oracle: dense-grid sign changes at doubled resolution
  const auto fine = grid.refined();
  const auto sf = evaluate_energy_slice(pot, fine, 4.9);
  const auto u2f = integrate_regular(fine, sf, RegularEnd::right);
  CHECK(u2f.node_count == 5);
}

TEST_CASE("node count is monotone and increments across eigenvalues") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  int prev = -1;
  int increments = 0;
  for (double E = 0.6; E <= 6.45; E += 0.2) {
    const auto s = evaluate_energy_slice(pot, grid, E);
    const auto u2 = integrate_regular(grid, s, RegularEnd::right);
    if (prev >= 0) {
      CHECK(u2.node_count >= prev);
      CHECK(u2.node_count - prev <= 1);
      if (u2.node_count == prev + 1) ++increments;
    } else {
      // just above E_0 the incoming node still sits beyond the outer
      // turning point, so the interior count lags at 0
      CHECK(u2.node_count == 0);
    }
    prev = u2.node_count;
  }
  CHECK(increments == 6);  // one unit step per eigenvalue crossed
  CHECK(prev == 6);
}

TEST_CASE("wronskian of the slab sine/cosine pair") {
  const SpatialGrid grid(0.0, M_PI * 3.0, 3001);
  std::vector<double> s(grid.n_points), c(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    s[i] = std::sin(grid.x(i));
    c[i] = std::cos(grid.x(i));
  }
  // (d sin) cos - sin (d cos) = cos^2 + sin^2 = 1
  const auto [w, spread] = wronskian_at(grid, 0.5 * M_PI * 3.0, s, c);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spread < 1e-6);
}

TEST_CASE("wronskian vanishes at an eigenvalue") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 2.5);
  auto u1 = integrate_regular(grid, s, RegularEnd::left);
  auto u2 = integrate_regular(grid, s, RegularEnd::right);
  // normalize both over the well before comparing magnitudes
  auto well_norm = [&](std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = s.allowed_begin; i < s.allowed_end; ++i)
      m = std::max(m, std::abs(v[i]));
    for (auto& x : v) x /= m;
  };
  well_norm(u1.values);
  well_norm(u2.values);
  const auto [w, spread] =
      wronskian_at(grid, 0.0, u1.values, u2.values);
  (void)spread;
  CHECK(std::abs(w) < 1e-6);  // proportional solutions
}

TEST_CASE("rescale_basis pins the Wronskian to 2 I sin(pi n)") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 4.9);
  const auto u1 = integrate_regular(grid, s, RegularEnd::left);
  const auto u2 = integrate_regular(grid, s, RegularEnd::right);
  const auto pair = rescale_basis(grid, s, u1, u2, 1.0, 4.4);
  CHECK(pair.W == doctest::Approx(2.0 * std::sin(0.4 * M_PI)).epsilon(1e-14));
  CHECK(pair.W == doctest::Approx(1.902113).epsilon(1e-6));
  CHECK(pair.W * pair.W < 4.0 * pair.I * pair.I);
  // the stored Wronskian matches the arrays to high accuracy
  const auto [w_arr, spread] =
      wronskian_at(grid, 0.0, pair.u1, pair.u2);
  CHECK(spread < 1e-6);
  CHECK(w_arr == doctest::Approx(pair.W).epsilon(1e-7));
}

TEST_CASE("rescale arithmetic: kappa = 2 I sin(pi n)/W_raw") {
  // pure arithmetic from the rescale rule
  const double I = 1.0, n_of_E = 4.4, w_raw = 0.37;
  const double kappa = 2 * I * std::sin(M_PI * n_of_E) / w_raw;
  CHECK(kappa == doctest::Approx(5.14085).epsilon(1e-5));
  CHECK(kappa * w_raw == doctest::Approx(1.902113).epsilon(1e-6));
  // half-integer n: the stored Wronskian is 2I exactly
  CHECK(2 * I * std::sin(M_PI * 4.5) == doctest::Approx(2.0 * I));
}

TEST_CASE("rescale_basis rejects integer n(E)") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 3.5);
  const auto u1 = integrate_regular(grid, s, RegularEnd::left);
  const auto u2 = integrate_regular(grid, s, RegularEnd::right);
  CHECK_THROWS_AS(rescale_basis(grid, s, u1, u2, 1.0, 3.0), Error);
}

TEST_CASE("g function: Wronskian with u1 equals 2I for any c") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 4.9);
  const auto u1 = integrate_regular(grid, s, RegularEnd::left);
  const auto u2 = integrate_regular(grid, s, RegularEnd::right);
  const auto pair = rescale_basis(grid, s, u1, u2, 1.0, 4.4);
  for (double c : {0.0, -1.0, 0.3}) {
    const auto g = build_g(pair, c);
    const auto [w, spread] = wronskian_at(grid, 0.0, pair.u1, g.values);
    CHECK(w == doctest::Approx(2.0 * pair.I).epsilon(1e-6));
    CHECK(spread < 1e-6);
  }
}

TEST_CASE("zeros of u1 and u2 interlace between the turning points") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto s = evaluate_energy_slice(pot, grid, 4.9);
  const auto u1 = integrate_regular(grid, s, RegularEnd::left);
  const auto u2 = integrate_regular(grid, s, RegularEnd::right);
  const auto pair = rescale_basis(grid, s, u1, u2, 1.0, 4.4);
  const auto z1 = basis_zeros(grid, s, pair.u1);
  const auto z2 = basis_zeros(grid, s, pair.u2);
  REQUIRE(z1.size() == 5);
  REQUIRE(z2.size() == 5);
  for (std::size_t k = 0; k + 1 < z1.size(); ++k) {
    const bool separated = (z2[k] > z1[k] && z2[k] < z1[k + 1]) ||
                           (z2[k + 1] > z1[k] && z2[k + 1] < z1[k + 1]);
    CHECK(separated);
  }
}

TEST_CASE("non-finite p^2 is rejected") {
  const SpatialGrid grid(0.0, 1.0, 101);
  auto s = slab_slice(grid);
  s.p_squared[50] = std::nan("");
  CHECK_THROWS_AS(integrate_regular(grid, s, RegularEnd::left), Error);
}
