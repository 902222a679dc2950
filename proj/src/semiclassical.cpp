#include "milne/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include "milne/errors.hpp"
#include "milne/numerics.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

namespace {
constexpr double kPi = 3.14159265358979323846;

// p^2 off the grid through the local six-point polynomial (p^2 is smooth;
// p itself has the square-root kink at the turning points)
double p2_at(const SpatialGrid& grid, const EnergySlice& slice, double x) {
  const auto xs = grid.samples();
  const std::size_t c0 =
      std::clamp(grid.upper_index(x), std::size_t{3}, grid.n_points - 3);
  return numerics::interp_poly(std::span(xs).subspan(c0 - 3, 6),
                               std::span(slice.p_squared).subspan(c0 - 3, 6),
                               x);
}

// int_t^{t + z} p dx with the substitution x = t + s*y^2 (s = +-1 picks the
// side): the integrand 2 y sqrt(p^2) is analytic through the turning point,
// so a fixed fine Simpson rule reaches quadrature accuracy
double edge_integral(const SpatialGrid& grid, const EnergySlice& slice,
                     double t, double z, int side_sign) {
  if (z <= 0) return 0.0;
  constexpr std::size_t m = 64;  // 65 samples
  const double ymax = std::sqrt(z);
  const double dy = ymax / double(m);
  std::vector<double> f(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double y = double(j) * dy;
    const double p2 = p2_at(grid, slice, t + side_sign * y * y);
    f[j] = 2.0 * y * std::sqrt(std::max(p2, 0.0));
  }
  return numerics::simpson(f, dy);
}

}  // namespace

ReducedAction reduced_action(const SpatialGrid& grid, const EnergySlice& slice) {
  ReducedAction ra;
  ra.begin = slice.allowed_begin;
  ra.origin = slice.t1;
  const std::size_t a = slice.allowed_begin, b = slice.allowed_end - 1;
  if (b < a + 16)
    fail(ErrorCode::internal, "reduced_action: allowed range too narrow");
  const std::size_t n = b - a + 1;
  ra.dS.resize(n);
  for (std::size_t i = 0; i < n; ++i) ra.dS[i] = slice.p(a + i);

  // the square-root endpoint regions are integrated under x = t -+ y^2;
  // the smooth interior uses the sixth-order cumulative rule
  const double span = slice.t2 - slice.t1;
  const double z_edge =
      std::min(0.1 * span, 60.0 * grid.step());
  const std::size_t ia = grid.upper_index(slice.t1 + z_edge);
  const std::size_t ib = grid.upper_index(slice.t2 - z_edge) - 1;

  ra.S.assign(n, 0.0);
  // left edge: per-point substitution integrals
  for (std::size_t i = a; i <= ia; ++i)
    ra.S[i - a] = edge_integral(grid, slice, slice.t1, grid.x(i) - slice.t1, 1);
  // interior: cumulative rule seeded at ia
  {
    std::vector<double> f(ra.dS.begin() + (ia - a), ra.dS.begin() + (ib - a) + 1);
    const auto cum = numerics::cumulative_integral(f, grid.step());
    for (std::size_t i = ia + 1; i <= ib; ++i)
      ra.S[i - a] = ra.S[ia - a] + cum[i - ia];
  }
  // right edge: total minus the tail substitution integrals
  const double s_at_ib = ra.S[ib - a];
  const double right_tail =
      edge_integral(grid, slice, slice.t2, slice.t2 - grid.x(ib), -1);
  ra.total = s_at_ib + right_tail;
  for (std::size_t i = ib + 1; i <= b; ++i)
    ra.S[i - a] = ra.total - edge_integral(grid, slice, slice.t2,
                                           slice.t2 - grid.x(i), -1);
  return ra;
}

WkbPair wkb_pair(const SpatialGrid& grid, const EnergySlice& slice,
                 const ReducedAction& action, double I, double W) {
  if (std::abs(W) > 2 * I)
    fail(ErrorCode::arccos_domain, "wkb_pair: |W/2I| > 1");
  const double beta = std::acos(W / (2 * I));
  const double delta = 0.1 * (slice.t2 - slice.t1);
  const std::size_t lo = grid.upper_index(slice.t1 + delta);
  const std::size_t hi = grid.upper_index(slice.t2 - delta);
  WkbPair pair;
  pair.begin = lo;
  pair.I = I;
  pair.W = W;
  const double hb = slice.hbar;
  pair.u1.resize(hi - lo);
  pair.u2.resize(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) {
    const double p = slice.p(i);
    const double amp = std::sqrt(2 * I * hb / p);
    const double th = action.S[i - action.begin] / hb + 0.25 * kPi;
    pair.u1[i - lo] = amp * std::sin(th);
    pair.u2[i - lo] = amp * std::cos(th + beta);
  }
  return pair;
}

SchwarzianResult schwarzian(const std::vector<double>& f, double h) {
  SchwarzianResult out;
  const auto d1 = numerics::derivative(f, h);
  const auto d2 = numerics::second_derivative(f, h);
  const auto d3 = numerics::third_derivative(f, h);
  double d1max = 0.0;
  for (double v : d1) d1max = std::max(d1max, std::abs(v));
  out.values.assign(f.size(), 0.0);
  out.valid.assign(f.size(), false);
  if (d1max == 0.0) return out;  // constant input: derivative vanishes
  for (std::size_t i = 3; i + 3 < f.size(); ++i) {
    if (std::abs(d1[i]) < 1e-12 * d1max) continue;
    const double r = d2[i] / d1[i];
    out.values[i] = d3[i] / d1[i] - 1.5 * r * r;
    out.valid[i] = true;
  }
  return out;
}

SemiclassicalAmpPhase semiclassical_amp_phase(const SpatialGrid& grid,
                                              const EnergySlice& slice,
                                              const ReducedAction& action,
                                              const WkbPair& pair, double c) {
  const double I = pair.I, W = pair.W;
  const double m11 = 1.0 / (2 * I) + 2 * I * c * c;
  const double m22 = 2 * I / (W * W);
  const double m12 = -2 * I * c / W;
  SemiclassicalAmpPhase out;
  out.begin = pair.begin;
  const std::size_t n = pair.u1.size();
  out.alpha.resize(n);
  out.dphi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = pair.u1[i], b = pair.u2[i];
    const double q = m11 * a * a + m22 * b * b + 2 * m12 * a * b;
    if (!(q > 0))
      fail(ErrorCode::negative_quadratic_form,
           "semiclassical quadratic form not positive");
    out.alpha[i] = std::sqrt(q);
    out.dphi[i] = 1.0 / q;
  }
  out.phi = numerics::cumulative_integral(out.dphi, grid.step());
  const double offset =
      action.S[pair.begin - action.begin] / slice.hbar;  // match at the left edge
  for (auto& v : out.phi) v += offset;
  return out;
}

ExpansionTerms hbar_expansion(const SpatialGrid& grid, const EnergySlice& slice,
                              const ReducedAction& action, double hbar_eff,
                              int order) {
  if (order != 0 && order != 2)
    fail(ErrorCode::config_invalid, "hbar_expansion: order must be 0 or 2");
  const double delta = 0.1 * (slice.t2 - slice.t1);
  std::size_t lo = grid.upper_index(slice.t1 + delta);
  std::size_t hi = grid.upper_index(slice.t2 - delta);
  lo = std::max(lo, action.begin);
  ExpansionTerms t;
  t.begin = lo;
  t.order = order;
  t.hbar_eff = hbar_eff;
  const std::size_t n = hi - lo;
  t.a0.resize(n);
  t.f0.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = slice.p(lo + i);
    t.a0[i] = 1.0 / std::sqrt(p);
    t.f0[i] = action.S[lo + i - action.begin];
  }
  if (order == 0) return t;

  const double h = grid.step();
  const auto a0p = numerics::derivative(t.a0, h);
  const auto a0pp = numerics::second_derivative(t.a0, h);
  std::vector<double> f2p(n);
  for (std::size_t i = 0; i < n; ++i)
    f2p[i] = a0pp[i] / (2.0 * t.a0[i] * slice.p(lo + i));
  t.f2 = numerics::cumulative_integral(f2p, h);
  const auto f2pp = numerics::derivative(f2p, h);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i)
    integrand[i] =
        (2 * a0p[i] * f2p[i] + t.a0[i] * f2pp[i]) / std::sqrt(slice.p(lo + i));
  const auto acc = numerics::cumulative_integral(integrand, h);
  t.a2.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    t.a2[i] = -acc[i] / (2.0 * std::sqrt(slice.p(lo + i)));
  return t;
}

namespace {

std::pair<std::size_t, std::size_t> midwell_window(const SpatialGrid& grid,
                                                   const EnergySlice& slice,
                                                   std::size_t begin,
                                                   std::size_t count) {
  const double span = slice.t2 - slice.t1;
  std::size_t lo = grid.upper_index(slice.t1 + 0.25 * span);
  std::size_t hi = grid.upper_index(slice.t2 - 0.25 * span);
  lo = std::max(lo, begin + 4);
  hi = std::min(hi, begin + count - 4);
  return {lo - begin, hi - begin};
}

}  // namespace

ExpansionResidual expansion_residual(const SpatialGrid& grid,
                                     const EnergySlice& slice,
                                     const ExpansionTerms& terms) {
  const double hb = terms.hbar_eff;
  const std::size_t n = terms.a0.size();
  ExpansionResidual out;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double amp =
        terms.order >= 2 ? terms.a0[i] + hb * hb * terms.a2[i] : terms.a0[i];
    const double th =
        terms.f0[i] / hb + (terms.order >= 2 ? hb * terms.f2[i] : 0.0);
    out.u[i] = amp * std::sin(th);
  }
  const double h = grid.step();
  const auto upp = numerics::second_derivative(out.u, h);
  out.residual.resize(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i)
    out.residual[i] =
        hb * hb * upp[i] + slice.p_squared[terms.begin + i] * out.u[i];
  const auto rp = numerics::derivative(out.residual, h);
  auto [lo, hi] = midwell_window(grid, slice, terms.begin, n);
  double env_max = 0.0, scale = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double p = slice.p(terms.begin + i);
    const double env = std::sqrt(out.residual[i] * out.residual[i] +
                                 (hb * rp[i] / p) * (hb * rp[i] / p));
    env_max = std::max(env_max, env);
    scale = std::max(scale,
                     std::abs(slice.p_squared[terms.begin + i] * out.u[i]));
  }
  out.midwell_envelope_norm = env_max / scale;
  return out;
}

double expansion_error_vs_exact(const SpatialGrid& grid,
                                const EnergySlice& slice,
                                const ExpansionTerms& terms) {
  const auto exact =
      integrate_regular(grid, slice, RegularEnd::left, terms.hbar_eff);
  const double hb = terms.hbar_eff;
  const std::size_t n = terms.a0.size();
  std::vector<double> bs(n), bc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double amp =
        terms.order >= 2 ? terms.a0[i] + hb * hb * terms.a2[i] : terms.a0[i];
    const double th =
        terms.f0[i] / hb + (terms.order >= 2 ? hb * terms.f2[i] : 0.0);
    bs[i] = amp * std::sin(th);
    bc[i] = amp * std::cos(th);
  }
  auto [lo, hi] = midwell_window(grid, slice, terms.begin, n);
  double sss = 0, ssc = 0, scc = 0, bs_u = 0, bc_u = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = exact.values[terms.begin + i];
    sss += bs[i] * bs[i];
    ssc += bs[i] * bc[i];
    scc += bc[i] * bc[i];
    bs_u += bs[i] * u;
    bc_u += bc[i] * u;
  }
  const double det = sss * scc - ssc * ssc;
  if (det == 0.0) fail(ErrorCode::internal, "expansion fit is singular");
  const double P = (scc * bs_u - ssc * bc_u) / det;
  const double Q = (sss * bc_u - ssc * bs_u) / det;
  double err = 0.0, scale = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = exact.values[terms.begin + i];
    err = std::max(err, std::abs(u - P * bs[i] - Q * bc[i]));
    scale = std::max(scale, std::abs(u));
  }
  return err / scale;
}

ExpandedPhase expanded_phase(const ExpansionTerms& terms, double I, double W,
                             double c) {
  ExpandedPhase out;
  const double ratio = 4.0 - W * W / (I * I);
  if (ratio < 0)
    fail(ErrorCode::reality_violated, "expanded_phase: W^2 > 4 I^2");
  out.bracket = 2 * I * c + I / W * std::sqrt(ratio);
  const double hb = terms.hbar_eff;
  out.phi.resize(terms.f0.size());
  for (std::size_t i = 0; i < out.phi.size(); ++i) {
    const double theta =
        terms.f0[i] / hb + (terms.order >= 2 ? hb * terms.f2[i] : 0.0);
    const double k = std::floor(theta / kPi);
    const double frac = theta - k * kPi;
    const double z = std::tan(0.5 * kPi - frac) - out.bracket;  // cot - bracket
    out.phi[i] = k * kPi + (0.5 * kPi - std::atan(z));
  }
  return out;
}

ActionIntegrals action_integrals(const PotentialSpec& potential,
                                 const SpatialGrid& grid,
                                 const QuantumNumberMap& map, double E,
                                 double I) {
  ActionIntegrals out;
  out.E = E;
  out.n_of_E = map.n_of(E);
  const auto slice = evaluate_energy_slice(potential, grid, E);
  out.J_classical = 2.0 * reduced_action(grid, slice).total;
  out.J_quantal_co =
      2.0 * potential.hbar() *
      accumulated_phase(potential, grid, map, E, I, CPolicy::of_energy)
          .phi_total;
  const double dE = 1e-3 * std::max(1.0, std::abs(E));
  const auto s_p = evaluate_energy_slice(potential, grid, E + dE);
  const auto s_m = evaluate_energy_slice(potential, grid, E - dE);
  out.period = (2.0 * reduced_action(grid, s_p).total -
                2.0 * reduced_action(grid, s_m).total) /
               (2 * dE);
  return out;
}

double quantal_action(const PotentialSpec& potential, const SpatialGrid& grid,
                      const QuantumNumberMap& map, double E, double I,
                      double c) {
  const double n = map.n_of(E);
  const double hbar = potential.hbar();
  if (std::abs(std::sin(kPi * n)) < 1e-8)
    return 2.0 * hbar *
           accumulated_phase_at_eigenvalue(potential, grid, map, E, I, c)
               .phi_total;
  return 2.0 * hbar *
         accumulated_phase(potential, grid, map, E, I, CPolicy::fixed, c)
             .phi_total;
}

}  // namespace milne
