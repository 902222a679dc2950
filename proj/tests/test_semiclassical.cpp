#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "milne/errors.hpp"
#include "milne/numerics.hpp"
#include "milne/semiclassical.hpp"
#include "support/reference.hpp"

using namespace milne;
using milne::testing::reference_grid;
using milne::testing::reference_potential;
using milne::testing::simpson_oracle;

namespace {

struct Fixture {
  SpatialGrid grid = reference_grid();
  PotentialSpec pot = reference_potential();
  EnergySlice slice;
  ReducedAction action;

  explicit Fixture(double E = 4.9) {
    slice = evaluate_energy_slice(pot, grid, E);
    action = reduced_action(grid, slice);
  }
};

const Fixture& fx() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("reduced action: harmonic closed forms") {
  const auto& f = fx();
  const double E = 4.9;
  // S(0) = pi E/2 (quarter-disc area of the p-x ellipse)
  std::vector<double> s_full(f.grid.n_points, 0.0);
  for (std::size_t i = 0; i < f.action.S.size(); ++i)
    s_full[f.action.begin + i] = f.action.S[i];
  const double s0 = sample_array(f.grid, s_full, 0.0);
  CHECK(s0 == doctest::Approx(M_PI * E / 2).epsilon(1e-8));
  CHECK(M_PI * E / 2 == doctest::Approx(7.696902).epsilon(1e-6));
  // S(t2) is half the loop: pi E/omega
  CHECK(f.action.total == doctest::Approx(M_PI * E).epsilon(1e-8));
  // dS = p pointwise
  for (std::size_t i = 0; i < f.action.dS.size(); ++i) {
    const double x = f.grid.x(f.action.begin + i);
    CHECK(f.action.dS[i] ==
          doctest::Approx(std::sqrt(2 * E - x * x)).epsilon(1e-10));
  }
  // S(t1) = 0 by construction and S increasing
  CHECK(f.action.S.front() < 2e-3);
  for (std::size_t i = 1; i < f.action.S.size(); ++i)
    CHECK(f.action.S[i] > f.action.S[i - 1]);
}

TEST_CASE("reduced action against a Simpson oracle on p") {
  const auto& f = fx();
  // oracle: plain Simpson of p over the interior allowed samples, compared
  // on the same sub-window (skipping the singular endpoints)
  const std::size_t a = 40;  // interior offset
  std::vector<double> p(f.action.dS.begin() + a, f.action.dS.end() - a);
  if (p.size() % 2 == 0) p.pop_back();
  const double oracle = simpson_oracle(p, f.grid.step());
  const double mine =
      f.action.S[a + p.size() - 1] - f.action.S[a];
  CHECK(mine == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("wkb pair: Wronskian equals the requested W mid-well") {
  const auto& f = fx();
  const double W = 2.0 * std::sin(0.4 * M_PI);
  const auto pair = wkb_pair(f.grid, f.slice, f.action, 1.0, W);
  // numerical Wronskian on the mid-well half
  const double h = f.grid.step();
  const auto d1 = numerics::derivative(pair.u1, h);
  const auto d2 = numerics::derivative(pair.u2, h);
  for (std::size_t i = 4; i + 4 < pair.u1.size(); ++i) {
    const double x = f.grid.x(pair.begin + i);
    if (std::abs(x) > 0.5 * f.slice.t2) continue;
    const double w = d1[i] * pair.u2[i] - pair.u1[i] * d2[i];
    CHECK(w == doctest::Approx(W).epsilon(1e-6));
  }
  CHECK_THROWS_AS(wkb_pair(f.grid, f.slice, f.action, 1.0, 2.5), Error);
}

TEST_CASE("wkb pair solves the phase-modified equation mid-well") {
  const auto& f = fx();
  const double W = 2.0 * std::sin(0.4 * M_PI);
  const auto pair = wkb_pair(f.grid, f.slice, f.action, 1.0, W);
  // residual of hbar^2 u'' + [p^2 + (hbar^2/2) <S;x>] u = 0
  const double h = f.grid.step();
  std::vector<double> s_arr(pair.u1.size());
  for (std::size_t i = 0; i < s_arr.size(); ++i)
    s_arr[i] = f.action.S[pair.begin + i - f.action.begin];
  const auto sch = schwarzian(s_arr, h);
  const auto upp = numerics::second_derivative(pair.u1, h);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 4; i + 4 < pair.u1.size(); ++i) {
    const double x = f.grid.x(pair.begin + i);
    if (std::abs(x) > 0.5 * f.slice.t2 || !sch.valid[i]) continue;
    const double p2 = f.slice.p_squared[pair.begin + i];
    const double res = upp[i] + (p2 + 0.5 * sch.values[i]) * pair.u1[i];
    worst = std::max(worst, std::abs(res));
    scale = std::max(scale, std::abs(p2 * pair.u1[i]));
  }
  CHECK(worst / scale < 1e-4);
}

TEST_CASE("wkb u1 matches the exact left-regular solution at high n") {
  // n(E) = 12: moderate excitation; amplitude-matched at the minimum,
  // agreement within 5% over the mid-well half
  const double E = 12.5;
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto slice = evaluate_energy_slice(pot, grid, E);
  const auto action = reduced_action(grid, slice);
  const double W = 2.0;  // arbitrary admissible value; u1~ is W-free
  const auto pair = wkb_pair(grid, slice, action, 1.0, W);
  const auto exact = integrate_regular(grid, slice, RegularEnd::left);
  const std::size_t i0 = grid.upper_index(0.2) - pair.begin;
  const double scale = exact.values[pair.begin + i0] / pair.u1[i0];
  double worst = 0.0, env = 0.0;
  for (std::size_t i = 0; i < pair.u1.size(); ++i) {
    const double x = grid.x(pair.begin + i);
    if (std::abs(x) > 0.5 * slice.t2) continue;
    worst = std::max(worst, std::abs(scale * pair.u1[i] -
                                     exact.values[pair.begin + i]));
    env = std::max(env, std::abs(exact.values[pair.begin + i]));
  }
  CHECK(worst / env < 0.05);
}

TEST_CASE("schwarzian stencils: closed forms and Moebius invariance") {
  // h = 2e-3 balances the h^4 truncation against the eps/h^3 rounding
  const SpatialGrid grid(-1.0, 1.0, 1001);
  const double h = grid.step();
  std::vector<double> ex(grid.n_points), tn(grid.n_points), mo(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    ex[i] = std::exp(x);
    tn[i] = std::tan(x);
    mo[i] = (2 * ex[i] + 1) / (ex[i] + 3);
  }
  const auto s_ex = schwarzian(ex, h);
  const auto s_tn = schwarzian(tn, h);
  const auto s_mo = schwarzian(mo, h);
  for (std::size_t i = 10; i + 10 < grid.n_points; ++i) {
    CHECK(s_ex.values[i] == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(s_tn.values[i] == doctest::Approx(2.0).epsilon(1e-6));
    // Moebius transforms leave the Schwarzian unchanged
    CHECK(std::abs(s_mo.values[i] - s_ex.values[i]) < 1e-6);
  }
  // vanishing first derivative is flagged, not silently divided
  std::vector<double> flat(grid.n_points, 1.0);
  const auto s_flat = schwarzian(flat, h);
  for (std::size_t i = 3; i + 3 < grid.n_points; ++i)
    CHECK_FALSE(s_flat.valid[i]);
}

TEST_CASE("semiclassical superposition collapses at c_o") {
  const auto& f = fx();
  const double I = 1.0;
  const double W = 2.0 * std::sin(0.4 * M_PI);
  const auto pair = wkb_pair(f.grid, f.slice, f.action, I, W);
  const double co = c_nonoscillating(I, W);
  const auto sc = semiclassical_amp_phase(f.grid, f.slice, f.action, pair, co);
  double dev_amp = 0.0, dev_phi = 0.0, smax = 0.0;
  for (std::size_t i = 0; i < sc.alpha.size(); ++i) {
    const double p = f.slice.p(sc.begin + i);
    dev_amp = std::max(dev_amp, std::abs(sc.alpha[i] * sc.alpha[i] * p - 1));
    const double s_over_h = f.action.S[sc.begin + i - f.action.begin];
    smax = std::max(smax, std::abs(s_over_h));
    dev_phi = std::max(dev_phi, std::abs(sc.phi[i] - s_over_h));
  }
  CHECK(dev_amp < 1e-8);
  CHECK(dev_phi / smax < 1e-8);
  // any other c oscillates
  const auto rough = semiclassical_amp_phase(f.grid, f.slice, f.action, pair,
                                             co + 0.2);
  TrimmedRange range{rough.begin, rough.begin + rough.alpha.size()};
  CHECK(stationary_points(f.grid, f.slice, rough.alpha, range).size() > 1);
}

TEST_CASE("expansion terms: slab degeneracy and the Wronskian identity") {
  // constant p^2: a0 constant, f2' = a2 = 0 (free-particle exactness)
  SpatialGrid grid(0.0, 10.0, 1001);
  EnergySlice s;
  s.E = 0.5;
  s.hbar = 1.0;
  s.mass = 1.0;
  s.p_squared.assign(grid.n_points, 4.0);
  s.t1 = 0.0;
  s.t2 = 10.0;
  s.allowed_begin = 0;
  s.allowed_end = grid.n_points;
  ReducedAction action;
  action.begin = 0;
  action.origin = 0.0;
  action.S.resize(grid.n_points);
  action.dS.assign(grid.n_points, 2.0);
  for (std::size_t i = 0; i < grid.n_points; ++i)
    action.S[i] = 2.0 * grid.x(i);
  action.total = 20.0;
  const auto t = hbar_expansion(grid, s, action, 1.0, 2);
  for (std::size_t i = 4; i + 4 < t.a0.size(); ++i) {
    CHECK(t.a0[i] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(t.f2[i]) < 1e-10);
    CHECK(std::abs(t.a2[i]) < 1e-10);
    // a0^2 dS = 1
    CHECK(t.a0[i] * t.a0[i] * action.dS[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("order-2 reconstruction beats order-0 against the exact u1") {
  const auto& f = fx();
  const auto t0 = hbar_expansion(f.grid, f.slice, f.action, 1.0, 0);
  const auto t2 = hbar_expansion(f.grid, f.slice, f.action, 1.0, 2);
  const double e0 = expansion_error_vs_exact(f.grid, f.slice, t0);
  const double e2 = expansion_error_vs_exact(f.grid, f.slice, t2);
  CHECK(e0 / e2 >= 5.0);
}

TEST_CASE("order-2 residual scales as the fourth power of hbar") {
  const auto& f = fx();
  auto env = [&](double hb) {
    const auto t = hbar_expansion(f.grid, f.slice, f.action, hb, 2);
    return expansion_residual(f.grid, f.slice, t).midwell_envelope_norm;
  };
  const double ratio = env(1.0) / env(0.5);
  CHECK(ratio > 0.7 * 16.0);
  CHECK(ratio < 1.3 * 16.0);
}

TEST_CASE("expanded phase: bracket vanishes at c_o, offset elsewhere") {
  const auto& f = fx();
  const double I = 1.0, W = 2.0 * std::sin(0.4 * M_PI);
  const auto t2 = hbar_expansion(f.grid, f.slice, f.action, 1.0, 2);
  const double co = c_nonoscillating(I, W);
  const auto at_co = expanded_phase(t2, I, W, co);
  CHECK(std::abs(at_co.bracket) < 1e-12);
  // with W = 2I the bracket vanishes at c = 0 as well (c_o = 0 there)
  const auto at_w2i = expanded_phase(t2, I, 2.0 * I, 0.0);
  CHECK(std::abs(at_w2i.bracket) < 1e-12);
  // at c_o the unwrapped phase is exactly S/hbar + hbar f2
  for (std::size_t i = 0; i < at_co.phi.size(); ++i)
    CHECK(at_co.phi[i] ==
          doctest::Approx(t2.f0[i] + t2.f2[i]).epsilon(1e-12));
  // generic c: oscillates about the c_o phase with the arccot offset scale
  const auto generic = expanded_phase(t2, I, W, 0.3);
  CHECK(generic.bracket != doctest::Approx(0.0));
  double dev = 0.0;
  for (std::size_t i = 0; i < generic.phi.size(); ++i)
    dev = std::max(dev, std::abs(generic.phi[i] - at_co.phi[i]));
  CHECK(dev > 0.1);
  CHECK(dev < M_PI);
}

TEST_CASE("action integrals at the reference energy") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto map = find_eigenvalues(pot, grid, 6);
  const auto act = action_integrals(pot, grid, map, 4.9, 1.0);
  CHECK(act.J_classical == doctest::Approx(2 * M_PI * 4.9).epsilon(1e-6));
  CHECK(2 * M_PI * 4.9 == doctest::Approx(30.787608).epsilon(1e-6));
  CHECK(act.period == doctest::Approx(2 * M_PI).epsilon(1e-6));
  // the quantal loop at the smooth normalization: 2 pi hbar (n(E) + 1)
  CHECK(act.J_quantal_co ==
        doctest::Approx(2 * M_PI * 5.4).epsilon(1e-4));
}

TEST_CASE("quantal action is an integer multiple of 2 pi hbar at E_3") {
  const auto grid = reference_grid();
  const auto pot = reference_potential();
  const auto map = find_eigenvalues(pot, grid, 6);
  for (double c : {0.0, 0.3}) {
    const double j = quantal_action(pot, grid, map, 3.5, 1.0, c);
    const double turns = j / (2 * M_PI);
    CHECK(std::abs(turns - std::round(turns)) < 1e-4);
    CHECK(std::round(turns) == 3.0);
  }
}
