#include "milne/schrodinger.hpp"

#include <algorithm>
#include <cmath>

#include "milne/errors.hpp"
#include "milne/numerics.hpp"

namespace milne {

namespace {

// five-point first derivative at index i (interior only)
double d5_at(const std::vector<double>& f, std::size_t i, double h) {
  return (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
}

// envelope^2 * p / (2 I hbar) should be 1 for the energy-normalized scale;
// returns the median square root of that ratio over the middle half of the
// classically allowed range.
double envelope_scale(const SpatialGrid& grid, const EnergySlice& slice,
                      const std::vector<double>& u, double I) {
  const double h = grid.step();
  const double span = slice.t2 - slice.t1;
  const std::size_t lo = grid.upper_index(slice.t1 + 0.25 * span);
  const std::size_t hi = grid.upper_index(slice.t2 - 0.25 * span);
  std::vector<double> ratios;
  ratios.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) {
    const double p = slice.p(i);
    if (p <= 0) continue;
    const double du = d5_at(u, i, h);
    const double env2 = u[i] * u[i] + (slice.hbar * du / p) * (slice.hbar * du / p);
    ratios.push_back(env2 * p / (2.0 * I * slice.hbar));
  }
  if (ratios.size() < 8)
    fail(ErrorCode::internal, "envelope_scale: too few allowed-range samples");
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                   ratios.end());
  const double med = ratios[ratios.size() / 2];
  if (!(med > 0) || !std::isfinite(med))
    fail(ErrorCode::non_finite_input, "envelope_scale: degenerate envelope");
  return std::sqrt(med);
}

// mid-well ripple of alpha^2(c) * p, measured by a lag-k second difference
// with k of order a quarter local wavelength
double alpha_ripple(const SpatialGrid& grid, const EnergySlice& slice,
                    const std::vector<double>& u1, const std::vector<double>& u2,
                    double I, double W, double c, double lambda) {
  const double m11 = 1.0 / (2 * I) + 2 * I * c * c;
  const double m22 = 2 * I / (W * W);
  const double m12 = -2 * I * c / W;
  const double span = slice.t2 - slice.t1;
  const std::size_t lo = grid.upper_index(slice.t1 + 0.2 * span);
  const std::size_t hi = grid.upper_index(slice.t2 - 0.2 * span);
  const std::size_t mid = grid.upper_index(0.5 * (slice.t1 + slice.t2));
  const double p_mid = slice.p(std::min(mid, slice.allowed_end - 1));
  const double h = grid.step();
  std::size_t k = std::size_t(
      std::max(1.0, std::round(0.25 * 3.141592653589793 * slice.hbar /
                               std::max(p_mid, 1e-12) / h)));
  if (lo + 2 * k >= hi) k = std::max<std::size_t>(1, (hi - lo) / 4);
  auto z = [&](std::size_t i) {
    const double a = lambda * u1[i], b = u2[i] / lambda;
    return (m11 * a * a + m22 * b * b + 2 * m12 * a * b) * slice.p(i);
  };
  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = lo + k; i + k < hi; ++i) {
    const double d2 = z(i + k) - 2 * z(i) + z(i - k);
    acc += d2 * d2;
    ++cnt;
  }
  return cnt ? std::sqrt(acc / double(cnt)) : 0.0;
}

void fix_first_lobe_sign(const EnergySlice& slice, LinearSolution& sol) {
  // first lobe = just inside the classically allowed range on the regular side
  const std::size_t probe =
      sol.regular_end == RegularEnd::left
          ? std::min(slice.allowed_begin + 5, slice.allowed_end - 1)
          : (slice.allowed_end >= 6 ? slice.allowed_end - 6
                                    : slice.allowed_begin);
  if (sol.values[probe] < 0)
    for (auto& v : sol.values) v = -v;
}

}  // namespace

LinearSolution integrate_regular(const SpatialGrid& grid,
                                 const EnergySlice& slice, RegularEnd side,
                                 double hbar_override) {
  const std::size_t n = grid.n_points;
  if (slice.p_squared.size() != n)
    fail(ErrorCode::internal, "integrate_regular: slice/grid size mismatch");
  for (double v : slice.p_squared)
    if (!std::isfinite(v))
      fail(ErrorCode::non_finite_input, "integrate_regular: non-finite p^2");

  const double hb = hbar_override > 0 ? hbar_override : slice.hbar;
  const double h = grid.step();
  std::vector<double> h2k2(n);
  for (std::size_t i = 0; i < n; ++i)
    h2k2[i] = h * h * slice.p_squared[i] / (hb * hb);

  LinearSolution sol;
  sol.regular_end = side;
  sol.values.assign(n, 0.0);
  auto& u = sol.values;

  // cancellation-free Numerov form: with w = (1 + h^2 k^2/12) u the
  // recursion is w_{next} = 2 w_cur - w_prev - h^2 k^2_cur u_cur
  double w_prev = 0.0, w_cur = 0.0;
  auto step_to = [&](std::size_t cur, std::size_t nxt) {
    const double w_nxt = 2.0 * w_cur - w_prev - h2k2[cur] * u[cur];
    if (!std::isfinite(w_nxt))
      fail(ErrorCode::overflow, "integrate_regular: overflow during march");
    u[nxt] = w_nxt / (1.0 + h2k2[nxt] / 12.0);
    w_prev = w_cur;
    w_cur = w_nxt;
    if (std::abs(w_cur) > 1e100) {
      if (side == RegularEnd::left)
        for (std::size_t j = 0; j <= nxt; ++j) u[j] *= 1e-100;
      else
        for (std::size_t j = nxt; j < n; ++j) u[j] *= 1e-100;
      w_prev *= 1e-100;
      w_cur *= 1e-100;
      sol.log_scale += 100.0 * 2.302585092994046;  // ln(1e100)
    }
  };

  if (side == RegularEnd::left) {
    u[0] = 0.0;
    u[1] = 1e-30;
    w_cur = (1.0 + h2k2[1] / 12.0) * u[1];
    for (std::size_t i = 1; i + 1 < n; ++i) step_to(i, i + 1);
  } else {
    u[n - 1] = 0.0;
    u[n - 2] = 1e-30;
    w_cur = (1.0 + h2k2[n - 2] / 12.0) * u[n - 2];
    for (std::size_t i = n - 2; i >= 1; --i) step_to(i, i - 1);
  }

  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));
  if (!(umax > 0) || !std::isfinite(umax))
    fail(ErrorCode::overflow, "integrate_regular: march produced no signal");
  for (auto& v : u) v /= umax;
  sol.log_scale += std::log(umax);

  fix_first_lobe_sign(slice, sol);
  sol.node_count = count_nodes(grid, slice, u);
  sol.derivative = numerics::derivative_o2(u, h);
  return sol;
}

int count_nodes(const SpatialGrid& grid, const EnergySlice& slice,
                const std::vector<double>& values) {
  (void)grid;
  int nodes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i) {
    const double v = values[i];
    if (v == 0.0) continue;
    if (have_prev && prev * v < 0) ++nodes;
    prev = v;
    have_prev = true;
  }
  return nodes;
}

std::pair<double, double> wronskian_at(const SpatialGrid& grid, double x0,
                                       const std::vector<double>& a,
                                       const std::vector<double>& b) {
  const double h = grid.step();
  std::size_t c = grid.upper_index(x0);
  c = std::clamp(c, std::size_t{4}, grid.n_points - 5);
  double mean = 0.0;
  double vals[5];
  for (int k = -2; k <= 2; ++k) {
    const std::size_t i = c + std::size_t(k + 2) - 2;
    const double w = d5_at(a, i, h) * b[i] - a[i] * d5_at(b, i, h);
    vals[k + 2] = w;
    mean += w;
  }
  mean /= 5.0;
  double spread = 0.0;
  for (double v : vals) spread = std::max(spread, std::abs(v - mean));
  return {mean, std::abs(mean) > 0 ? spread / std::abs(mean) : 0.0};
}

std::pair<double, int> wronskian_and_nodes(const SpatialGrid& grid,
                                           const EnergySlice& slice,
                                           const LinearSolution& u1,
                                           const LinearSolution& u2) {
  const double xmid = 0.5 * (slice.t1 + slice.t2);
  auto [w, spread] = wronskian_at(grid, xmid, u1.values, u2.values);
  if (spread > 1e-4)
    fail(ErrorCode::inconsistent_wronskian,
         "Wronskian varies across sample points (relative spread " +
             std::to_string(spread) + ")");
  return {w, count_nodes(grid, slice, u2.values)};
}

BasisPair rescale_basis(const SpatialGrid& grid, const EnergySlice& slice,
                        const LinearSolution& u1, const LinearSolution& u2,
                        double I, double n_of_E) {
  const double sin_pin = std::sin(3.141592653589793 * n_of_E);
  if (std::abs(sin_pin) < 1e-8)
    fail(ErrorCode::eigenvalue_degenerate,
         "n(E) is an integer: Wronskian target 2I sin(pi n) vanishes");
  if (!(I > 0)) fail(ErrorCode::config_invalid, "rescale_basis: I must be > 0");

  BasisPair pair;
  pair.I = I;
  pair.n_of_E = n_of_E;
  pair.u1 = u1.values;
  pair.u2 = u2.values;

  const double s1 = envelope_scale(grid, slice, pair.u1, I);
  const double s2 = envelope_scale(grid, slice, pair.u2, I);
  for (auto& v : pair.u1) v /= s1;
  for (auto& v : pair.u2) v /= s2;

  const double xmid = 0.5 * (slice.t1 + slice.t2);
  auto [w_raw, spread] = wronskian_at(grid, xmid, pair.u1, pair.u2);
  if (w_raw == 0.0)
    fail(ErrorCode::eigenvalue_degenerate, "raw Wronskian vanished");
  if (spread > 1e-4)
    fail(ErrorCode::inconsistent_wronskian,
         "rescale_basis: unreliable raw Wronskian");

  pair.W = 2.0 * I * sin_pin;
  const double kappa = pair.W / w_raw;
  for (auto& v : pair.u2) v *= kappa;

  // W-preserving ripple polish: u1 *= lambda, u2 /= lambda
  const double co =
      -std::sqrt(std::max(1.0 / (pair.W * pair.W) - 1.0 / (4 * I * I), 0.0));
  auto ripple = [&](double loglam) {
    const double lam = std::exp(loglam);
    return std::min(
        alpha_ripple(grid, slice, pair.u1, pair.u2, I, pair.W, co, lam),
        alpha_ripple(grid, slice, pair.u1, pair.u2, I, pair.W, -co, lam));
  };
  double best = 0.0, best_val = ripple(0.0);
  for (int k = -20; k <= 20; ++k) {
    const double ll = 0.01 * k;
    const double r = ripple(ll);
    if (r < best_val) { best_val = r; best = ll; }
  }
  best = numerics::golden_min(ripple, best - 0.01, best + 0.01, 1e-6);
  const double lam = std::exp(best);
  for (auto& v : pair.u1) v *= lam;
  for (auto& v : pair.u2) v /= lam;
  pair.lambda_balance = lam;
  return pair;
}

BasisPair rescale_basis_at_eigenvalue(const SpatialGrid& grid,
                                      const EnergySlice& slice,
                                      const LinearSolution& u1,
                                      const LinearSolution& u2, double I,
                                      double n_of_E) {
  BasisPair pair;
  pair.I = I;
  pair.n_of_E = n_of_E;
  pair.u1 = u1.values;
  pair.u2 = u2.values;
  const double s1 = envelope_scale(grid, slice, pair.u1, I);
  const double s2 = envelope_scale(grid, slice, pair.u2, I);
  for (auto& v : pair.u1) v /= s1;
  for (auto& v : pair.u2) v /= s2;
  const double xmid = 0.5 * (slice.t1 + slice.t2);
  pair.W = wronskian_at(grid, xmid, pair.u1, pair.u2).first;
  return pair;
}

GFunction build_g(const BasisPair& pair, double c) {
  GFunction g;
  g.c = c;
  g.values.resize(pair.u1.size());
  const double two_i = 2.0 * pair.I;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    g.values[i] = two_i * (pair.u2[i] / pair.W - c * pair.u1[i]);
  return g;
}

}  // namespace milne
