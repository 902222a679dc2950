#include "milne/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "milne/errors.hpp"
#include "milne/numerics.hpp"
#include "milne/semiclassical.hpp"

namespace milne {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateSin = 1e-8;
}  // namespace

QuantumNumberMap QuantumNumberMap::analytic_harmonic(double mass, double omega,
                                                     double hbar, int n_max) {
  QuantumNumberMap m;
  m.kind_ = MapKind::analytic_harmonic;
  m.mass_ = mass;
  m.omega_ = omega;
  m.hbar_ = hbar;
  for (int k = 0; k <= n_max; ++k)
    m.eigenvalues_.push_back(hbar * omega * (k + 0.5));
  return m;
}

QuantumNumberMap QuantumNumberMap::interpolated(std::vector<double> eigenvalues) {
  if (eigenvalues.empty())
    fail(ErrorCode::config_invalid, "interpolated map needs eigenvalues");
  QuantumNumberMap m;
  m.kind_ = MapKind::interpolated;
  m.eigenvalues_ = eigenvalues;
  if (eigenvalues.size() < 2) return m;  // single level: no continuation
  std::vector<double> ns(eigenvalues.size());
  for (std::size_t i = 0; i < ns.size(); ++i) ns[i] = double(i);
  m.n_of_E_ = numerics::Pchip(std::move(eigenvalues), std::move(ns));
  return m;
}

double QuantumNumberMap::n_of(double E) const {
  if (kind_ == MapKind::analytic_harmonic)
    return E / (hbar_ * omega_) - 0.5;
  if (eigenvalues_.size() < 2) {
    if (std::abs(E - eigenvalues_.front()) <=
        1e-9 * std::max(1.0, std::abs(E)))
      return 0.0;
    fail(ErrorCode::out_of_range,
         "single-level map has no continuation away from E_0");
  }
  if (E < n_of_E_.x_front() || E > n_of_E_.x_back())
    fail(ErrorCode::out_of_range,
         "interpolated map queried beyond stored eigenvalues");
  return n_of_E_(E);
}

double QuantumNumberMap::dn_dE(double E) const {
  if (kind_ == MapKind::analytic_harmonic) return 1.0 / (hbar_ * omega_);
  if (eigenvalues_.size() < 2)
    fail(ErrorCode::out_of_range, "single-level map has no derivative");
  if (E < n_of_E_.x_front() || E > n_of_E_.x_back())
    fail(ErrorCode::out_of_range,
         "interpolated map queried beyond stored eigenvalues");
  return n_of_E_.derivative(E);
}

double QuantumNumberMap::energy_at(double n_real) const {
  if (kind_ == MapKind::analytic_harmonic)
    return hbar_ * omega_ * (n_real + 0.5);
  if (eigenvalues_.size() < 2) {
    if (std::abs(n_real) < 1e-9) return eigenvalues_.front();
    fail(ErrorCode::out_of_range, "single-level map covers n = 0 only");
  }
  const double lo = eigenvalues_.front(), hi = eigenvalues_.back();
  if (n_real < 0 || n_real > double(eigenvalues_.size() - 1))
    fail(ErrorCode::out_of_range, "energy_at: n outside the covered range");
  return numerics::brent([&](double E) { return n_of_E_(E) - n_real; }, lo, hi,
                         1e-14);
}

namespace {

struct WronskianProbe {
  double w = 0.0;
  int nodes_u2 = 0;
};

// W(E) with both solutions normalized over the classically allowed range;
// positive normalization keeps the sign structure of W(E) intact.
WronskianProbe probe(const PotentialSpec& potential, const SpatialGrid& grid,
                     double E) {
  const auto slice = evaluate_energy_slice(potential, grid, E);
  auto u1 = integrate_regular(grid, slice, RegularEnd::left);
  auto u2 = integrate_regular(grid, slice, RegularEnd::right);
  auto well_norm = [&](std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i)
      m = std::max(m, std::abs(v[i]));
    for (auto& x : v) x /= m;
  };
  well_norm(u1.values);
  well_norm(u2.values);
  WronskianProbe out;
  out.w = wronskian_at(grid, 0.5 * (slice.t1 + slice.t2), u1.values, u2.values)
              .first;
  out.nodes_u2 = u2.node_count;
  return out;
}

double solve_one(const PotentialSpec& potential, const SpatialGrid& grid,
                 double e_lo, double e_hi) {
  return numerics::brent(
      [&](double E) { return probe(potential, grid, E).w; }, e_lo, e_hi, 1e-13);
}

double v_min_on_grid(const PotentialSpec& potential, const SpatialGrid& grid) {
  double v = potential(grid.x(0));
  for (std::size_t i = 1; i < grid.n_points; ++i)
    v = std::min(v, potential(grid.x(i)));
  return v;
}

}  // namespace

QuantumNumberMap find_eigenvalues(const PotentialSpec& potential,
                                  const SpatialGrid& grid, int n_max,
                                  bool force_interpolated) {
  if (n_max < 0) fail(ErrorCode::config_invalid, "find_eigenvalues: n_max < 0");
  if (potential.kind() == PotentialKind::harmonic && !force_interpolated)
    return QuantumNumberMap::analytic_harmonic(potential.mass(),
                                               potential.omega(),
                                               potential.hbar(), n_max);

  const double v_min = v_min_on_grid(potential, grid);
  const double v_edge = std::min(potential(grid.x_min), potential(grid.x_max));
  const double e0 = v_min + 1e-4 * std::max(1.0, v_edge - v_min);

  // W(E) flips sign exactly once per eigenvalue. Scan upward collecting
  // sign-change brackets; the step is capped by the semiclassical phase
  // increment (about one level per unit of S_tot/(pi hbar)), which the
  // interior node count cannot provide reliably (it lags the eigenvalue by
  // the time the incoming node needs to cross the outer turning point).
  auto n_wkb = [&](double E) {
    const auto slice = evaluate_energy_slice(potential, grid, E);
    return reduced_action(grid, slice).total / (kPi * potential.hbar());
  };
  auto first_probe = probe(potential, grid, e0);
  if (first_probe.nodes_u2 != 0)
    fail(ErrorCode::bracket_not_found,
         "node count does not start at zero near the potential minimum");
  std::vector<std::pair<double, double>> brackets;  // (lo, hi) per root
  double e_prev = e0;
  double w_prev = first_probe.w;
  double nw_prev = n_wkb(e0);
  double step = 0.05 * std::max(1.0, v_edge - v_min);
  while (int(brackets.size()) <= n_max) {
    double e_next = e_prev + step;
    if (e_next >= 0.98 * v_edge)
      fail(ErrorCode::bracket_not_found,
           "scan reached the grid-edge potential before finding all "
           "eigenvalues; enlarge the grid");
    double nw_next = n_wkb(e_next);
    while (nw_next - nw_prev > 0.45) {  // too coarse: halve the step
      step *= 0.5;
      e_next = e_prev + step;
      nw_next = n_wkb(e_next);
    }
    const auto pr = probe(potential, grid, e_next);
    if (w_prev * pr.w < 0) brackets.emplace_back(e_prev, e_next);
    if (nw_next - nw_prev < 0.2) step *= 1.6;
    e_prev = e_next;
    w_prev = pr.w;
    nw_prev = nw_next;
  }

  const SpatialGrid fine = grid.refined();
  std::vector<double> eigenvalues;
  for (int k = 0; k <= n_max; ++k) {
    const auto [lo, hi] = brackets[std::size_t(k)];
    const double e_coarse = solve_one(potential, grid, lo, hi);
    const double e_fine = solve_one(potential, fine, lo, hi);
    eigenvalues.push_back((16.0 * e_fine - e_coarse) / 15.0);
  }
  return QuantumNumberMap::interpolated(std::move(eigenvalues));
}

double quantum_number(const QuantumNumberMap& map, double E) {
  return map.n_of(E);
}

double c_of_energy(double I, const QuantumNumberMap& map, double E) {
  const double n = map.n_of(E);
  const double s = std::sin(kPi * n);
  if (std::abs(s) < kDegenerateSin)
    fail(ErrorCode::eigenvalue_degenerate,
         "c(E) diverges at integer n(E) = " + std::to_string(n));
  const double c = -std::cos(kPi * n) / (2.0 * I * s);
  return std::clamp(c, -ErmakovParams::c_max, ErmakovParams::c_max);
}

PipelineResult run_amplitude_phase(const PotentialSpec& potential,
                                   const SpatialGrid& grid,
                                   const QuantumNumberMap& map, double E,
                                   double I, CPolicy policy, double c_fixed) {
  PipelineResult r;
  r.slice = evaluate_energy_slice(potential, grid, E);
  r.raw_u1 = integrate_regular(grid, r.slice, RegularEnd::left);
  r.raw_u2 = integrate_regular(grid, r.slice, RegularEnd::right);
  r.n_of_E = map.n_of(E);
  r.pair = rescale_basis(grid, r.slice, r.raw_u1, r.raw_u2, I, r.n_of_E);
  switch (policy) {
    case CPolicy::nonosc:
      r.c_used = nonoscillating_c(grid, r.slice, r.pair);
      break;
    case CPolicy::minus_nonosc:
      r.c_used = -nonoscillating_c(grid, r.slice, r.pair);
      break;
    case CPolicy::of_energy:
      r.c_used = c_of_energy(I, map, E);
      break;
    case CPolicy::fixed:
      r.c_used = c_fixed;
      break;
  }
  r.ap = phase(grid, r.slice, r.pair, ErmakovParams{I, r.c_used});
  return r;
}

double nonoscillating_c(const SpatialGrid& grid, const EnergySlice& slice,
                        const BasisPair& pair) {
  const double co = c_nonoscillating(pair.I, pair.W);
  const auto range = trimmed_interior(grid, slice, pair);
  auto count = [&](double c) {
    const auto a = amplitude(grid, slice, pair, ErmakovParams{pair.I, c}, range);
    return stationary_points(grid, slice, a, range).size();
  };
  return count(co) <= count(-co) ? co : -co;
}

AccumulatedPhase accumulated_phase(const PotentialSpec& potential,
                                   const SpatialGrid& grid,
                                   const QuantumNumberMap& map, double E,
                                   double I, CPolicy policy, double c_fixed) {
  const auto r = run_amplitude_phase(potential, grid, map, E, I, policy, c_fixed);
  AccumulatedPhase out;
  out.E = E;
  out.phi_total = r.ap.phi_total;
  out.c_used = r.c_used;
  out.n_of_E = r.n_of_E;
  out.tail_correction = r.ap.tail_left + r.ap.tail_right;
  return out;
}

double winding_phase(const SpatialGrid& grid, const EnergySlice& slice,
                     const BasisPair& pair, const ErmakovParams& params,
                     double x_from, double x_upto) {
  const auto range = trimmed_interior(grid, slice, pair);
  const auto g = build_g(pair, params.c);
  const std::size_t first =
      std::clamp(grid.upper_index(x_from), range.begin + 1, range.end - 2);
  const std::size_t last =
      std::clamp(grid.upper_index(x_upto), first, range.end - 1);
  // anchor on the principal branch: with x_from in or near the left
  // forbidden region the true phase there is small, and |u1/g| is the
  // actual value regardless of the (possibly noise-signed) W inside g
  double acc = std::atan(pair.u1[first] / g.values[first]);
  for (std::size_t i = first; i < last; ++i) {
    const double gx = g.values[i], gy = pair.u1[i];
    const double hx = g.values[i + 1], hy = pair.u1[i + 1];
    acc += std::atan2(gx * hy - gy * hx, gx * hx + gy * hy);
  }
  return acc;
}

AccumulatedPhase accumulated_phase_at_eigenvalue(const PotentialSpec& potential,
                                                 const SpatialGrid& grid,
                                                 const QuantumNumberMap& map,
                                                 double E, double I, double c) {
  const auto slice = evaluate_energy_slice(potential, grid, E);
  const auto u1 = integrate_regular(grid, slice, RegularEnd::left);
  const auto u2 = integrate_regular(grid, slice, RegularEnd::right);
  const auto pair =
      rescale_basis_at_eigenvalue(grid, slice, u1, u2, I, map.n_of(E));
  // window just past the turning points: outside it the residual growing
  // admixture of the off-eigenvalue solutions takes over and flips signs
  const double x_low = std::max(slice.t1 - 1.0, grid.x_min + 5 * grid.step());
  const double x_star = std::min(slice.t2 + 1.0, grid.x_max - 5 * grid.step());
  const double base =
      winding_phase(grid, slice, pair, ErmakovParams{I, c}, x_low, x_star);
  AccumulatedPhase out;
  out.E = E;
  out.n_of_E = map.n_of(E);
  out.c_used = c;
  // back out the local arctan remainder: past x_star the terminal arctan
  // terms cancel at an eigenvalue, leaving phi(s2) = pi * node count
  const auto g = build_g(pair, c);
  const auto range = trimmed_interior(grid, slice, pair);
  const std::size_t i_star =
      std::clamp(grid.upper_index(x_star), range.begin + 1, range.end - 1);
  out.phi_total = base - std::atan(pair.u1[i_star] / g.values[i_star]);
  out.tail_correction = 0.0;
  return out;
}

bool NormalizationReport::all_passed() const {
  for (const auto& item : items)
    if (!item.passed) return false;
  return true;
}

namespace {

NormalizationItem make_item(std::string name, double lhs, double rhs,
                            double tol, std::string detail = {}) {
  NormalizationItem it;
  it.name = std::move(name);
  it.lhs = lhs;
  it.rhs = rhs;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  it.rel_dev = std::abs(lhs - rhs) / scale;
  it.tolerance = tol;
  it.passed = it.rel_dev <= tol;
  it.detail = std::move(detail);
  return it;
}

// integral of the de Broglie wavelength over the classically allowed range,
// with the inverse-square-root endpoints handled analytically
double de_broglie_integral(const SpatialGrid& grid, const EnergySlice& slice) {
  const double two_pi_hbar = 2 * kPi * slice.hbar;
  const std::size_t a = slice.allowed_begin + 2;
  const std::size_t b = slice.allowed_end - 3;
  std::vector<double> f;
  f.reserve(b - a + 1);
  for (std::size_t i = a; i <= b; ++i) f.push_back(two_pi_hbar / slice.p(i));
  double total = numerics::simpson(f, grid.step());
  // endpoint segments analytically, with p ~ C sqrt(|x - t|):
  //   int_t^x dx'/p = 2 sqrt(x - t)/C = 2 (x - t)/p(x)
  total += two_pi_hbar * 2.0 * (grid.x(a) - slice.t1) / slice.p(a);
  total += two_pi_hbar * 2.0 * (slice.t2 - grid.x(b)) / slice.p(b);
  return total;
}

}  // namespace

NormalizationReport normalization_checks(const PotentialSpec& potential,
                                         const SpatialGrid& grid,
                                         const QuantumNumberMap& map,
                                         double I) {
  NormalizationReport rep;
  const double hbar = potential.hbar();
  const double mass = potential.mass();
  const auto& eig = map.eigenvalues();
  if (eig.empty())
    fail(ErrorCode::config_invalid, "normalization_checks: empty spectrum");
  const std::size_t kref = std::min<std::size_t>(3, eig.size() - 1);
  const double e0 = eig[kref];

  // (a) windowed norm identity at the eigenvalue, dE by centered difference
  {
    const double dE = 1e-4;
    const auto slice = evaluate_energy_slice(potential, grid, e0);
    auto u_mid = integrate_regular(grid, slice, RegularEnd::left);
    const auto slice_p = evaluate_energy_slice(potential, grid, e0 + dE);
    const auto slice_m = evaluate_energy_slice(potential, grid, e0 - dE);
    auto u_p = integrate_regular(grid, slice_p, RegularEnd::left);
    auto u_m = integrate_regular(grid, slice_m, RegularEnd::left);
    // smooth O(1) scale convention: normalize by the maximum over the
    // classically allowed range of the mid slice
    auto well_norm = [&](std::vector<double>& v) {
      double m = 0.0;
      for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i)
        m = std::max(m, std::abs(v[i]));
      for (auto& x : v) x /= m;
    };
    well_norm(u_mid.values);
    well_norm(u_p.values);
    well_norm(u_m.values);
    const double h = grid.step();
    const std::size_t iL = grid.upper_index(slice.t1 - 1.2);
    const std::size_t iR = grid.upper_index(slice.t2 + 1.2);
    auto bracket_at = [&](std::size_t i) {
      auto d5 = [&](const std::vector<double>& f) {
        return (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
      };
      const double du_mid = d5(u_mid.values);
      const double dEu = (u_p.values[i] - u_m.values[i]) / (2 * dE);
      const double dEdu = (d5(u_p.values) - d5(u_m.values)) / (2 * dE);
      return du_mid * dEu - u_mid.values[i] * dEdu;
    };
    std::vector<double> sq;
    sq.reserve(iR - iL + 1);
    for (std::size_t i = iL; i <= iR; ++i)
      sq.push_back(u_mid.values[i] * u_mid.values[i]);
    const double lhs = numerics::simpson(sq, h);
    const double rhs =
        hbar * hbar / (2 * mass) * (bracket_at(iR) - bracket_at(iL));
    rep.items.push_back(make_item("norm-energy-derivative", lhs, rhs, 1e-3,
                                  "windowed norm vs energy derivative at E_" +
                                      std::to_string(kref)));
  }

  // the phase-derivative form of the same statement: under the smooth
  // normalization c = c(E) the accumulated phase differentiates cleanly
  // (at fixed c the pointwise derivative at an eigenvalue does not exist:
  // the staircase rise concentrates there as the boundary recedes)
  {
    const double e_star = map.energy_at(std::min(3.25, double(eig.size()) - 0.75));
    const double dE = 1e-4;
    const double dphi =
        (accumulated_phase(potential, grid, map, e_star + dE, I,
                           CPolicy::of_energy)
             .phi_total -
         accumulated_phase(potential, grid, map, e_star - dE, I,
                           CPolicy::of_energy)
             .phi_total) /
        (2 * dE);
    rep.items.push_back(make_item(
        "norm-phase-derivative", I * dphi, I * kPi * map.dn_dE(e_star), 1e-6,
        "I dE{phi(s2, c(E))} against I pi dE{n} between eigenvalues"));
  }

  // (b) chain-rule identity for the improper-normalization right side
  {
    const std::size_t kmid = std::min<std::size_t>(4, eig.size() - 1);
    const double e_star = map.energy_at(double(kmid) + 0.25);
    const double dE = 1e-5 * std::max(1.0, std::abs(e_star));
    const double dc =
        (c_of_energy(I, map, e_star + dE) - c_of_energy(I, map, e_star - dE)) /
        (2 * dE);
    const double c = c_of_energy(I, map, e_star);
    const double lhs = I * dc / (1.0 / (2 * I) + 2 * I * c * c);
    const double rhs = I * kPi * map.dn_dE(e_star);
    rep.items.push_back(make_item("improper-normalization-identity", lhs, rhs,
                                  1e-6, "I dE{c} (1/2I + 2Ic^2)^{-1} vs I pi dE{n}"));
  }

  // (c) unity normalization
  {
    const double i_unity = mass / (hbar * hbar * kPi * map.dn_dE(e0));
    double expected = i_unity;
    std::string detail = "I from m/(hbar^2 pi dE{n})";
    if (potential.kind() == PotentialKind::harmonic) {
      expected = mass * potential.omega() / (hbar * kPi);
      detail = "against m omega/(hbar pi)";
    }
    rep.items.push_back(
        make_item("unity-normalization", i_unity, expected, 1e-4, detail));
  }

  // (d) de Broglie form, evaluated between the eigenvalues
  {
    const double e_star = map.energy_at(std::min(3.25, double(eig.size()) - 1.0));
    const auto slice = evaluate_energy_slice(potential, grid, e_star);
    const double i_db = 2 * kPi / de_broglie_integral(grid, slice);
    // energy normalization reference at the same energy; for anharmonic
    // wells the wavelength form matches only to semiclassical accuracy
    const double i_ref = mass / (hbar * hbar * kPi * map.dn_dE(e_star));
    const double tol =
        potential.kind() == PotentialKind::harmonic ? 1e-3 : 5e-2;
    rep.items.push_back(make_item("de-broglie-invariant", i_db, i_ref, tol,
                                  "2 pi [int lambda dx]^{-1} vs the unity form"));
  }
  return rep;
}

}  // namespace milne
