#include "milne/ermakov.hpp"

#include <algorithm>
#include <cmath>

#include "milne/errors.hpp"
#include "milne/numerics.hpp"

namespace milne {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTrimGrowth = 1e12;

double clamp_c(double c) {
  if (!std::isfinite(c)) fail(ErrorCode::non_finite_input, "c is not finite");
  return std::clamp(c, -ErmakovParams::c_max, ErmakovParams::c_max);
}
}  // namespace

double CoefficientMatrix::det() const {
  // Kahan's difference of products: m11*m22 - m12^2 with the rounding of
  // the subtrahend compensated through fma
  const double w = m12 * m12;
  const double e = std::fma(m12, m12, -w);
  const double f = std::fma(m11, m22, -w);
  return f - e;
}

CoefficientMatrix coefficient_matrix(const ErmakovParams& params, double W) {
  if (W == 0.0) fail(ErrorCode::config_invalid, "coefficient_matrix: W = 0");
  const double I = params.I;
  const double c = clamp_c(params.c);
  CoefficientMatrix m;
  m.m11 = 1.0 / (2 * I) + 2 * I * c * c;
  m.m22 = 2 * I / (W * W);
  m.m12 = -2 * I * c / W;
  return m;
}

TrimmedRange trimmed_interior(const SpatialGrid& grid, const EnergySlice& slice,
                              const BasisPair& pair) {
  // per-solution caps keep the window invariant under basis rescalings
  double w1 = 0.0, w2 = 0.0;
  for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i) {
    w1 = std::max(w1, std::abs(pair.u1[i]));
    w2 = std::max(w2, std::abs(pair.u2[i]));
  }
  const double cap1 = kTrimGrowth * w1;
  const double cap2 = kTrimGrowth * w2;
  auto inside = [&](std::size_t i) {
    return std::abs(pair.u1[i]) <= cap1 && std::abs(pair.u2[i]) <= cap2;
  };
  TrimmedRange r;
  std::size_t lo = slice.allowed_begin;
  while (lo > 0 && inside(lo - 1)) --lo;
  std::size_t hi = slice.allowed_end;
  while (hi < grid.n_points && inside(hi)) ++hi;
  r.begin = lo;
  r.end = hi;
  if (r.size() < 16)
    fail(ErrorCode::internal, "trimmed interior unexpectedly small");
  return r;
}

std::vector<double> amplitude(const SpatialGrid& grid, const EnergySlice& slice,
                              const BasisPair& pair, const ErmakovParams& params,
                              const TrimmedRange& range) {
  (void)grid;
  (void)slice;
  const auto m = coefficient_matrix(params, pair.W);
  // positive definiteness within what the stored entries can represent
  // (at the |c| clamp the determinant sits below the entries' rounding)
  if (!(m.m11 > 0) || m.det() < -1e-13 * m.m11 * m.m22)
    fail(ErrorCode::negative_quadratic_form,
         "coefficient matrix is not positive definite");
  std::vector<double> alpha(range.size());
  double scale = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    const double a = pair.u1[i], b = pair.u2[i];
    const double q = m.m11 * a * a + m.m22 * b * b + 2 * m.m12 * a * b;
    scale = std::max(scale, std::abs(q));
    alpha[i - range.begin] = q;
  }
  for (auto& q : alpha) {
    if (q < -1e-14 * scale)
      fail(ErrorCode::negative_quadratic_form,
           "quadratic form dipped negative beyond tolerance");
    q = std::sqrt(std::max(q, 0.0));
  }
  return alpha;
}

double c_nonoscillating(double I, double W, bool positive_branch) {
  if (!(I > 0)) fail(ErrorCode::config_invalid, "c_nonoscillating: I <= 0");
  if (W * W > 4 * I * I)
    fail(ErrorCode::reality_violated,
         "W^2 > 4 I^2: rescale the basis before requesting c_o");
  const double mag =
      std::sqrt(std::max(1.0 / (W * W) - 1.0 / (4 * I * I), 0.0));
  return positive_branch ? mag : -mag;
}

namespace {

// tail of integral of alpha^-2 beyond the trim boundary, assuming the
// asymptotic exponential growth of alpha at rate |p|/hbar
double exp_tail(const EnergySlice& slice, double dphi_edge, std::size_t idx) {
  const double p2 = slice.p_squared[idx];
  if (p2 >= 0) return 0.0;
  return slice.hbar * dphi_edge / (2.0 * std::sqrt(-p2));
}

}  // namespace

AmplitudePhase phase(const SpatialGrid& grid, const EnergySlice& slice,
                     const BasisPair& pair, const ErmakovParams& params) {
  AmplitudePhase ap;
  ap.params = params;
  ap.params.c = clamp_c(params.c);
  ap.range = trimmed_interior(grid, slice, pair);
  ap.alpha = amplitude(grid, slice, pair, ap.params, ap.range);

  ap.dphi.resize(ap.alpha.size());
  for (std::size_t i = 0; i < ap.alpha.size(); ++i) {
    const double a2 = ap.alpha[i] * ap.alpha[i];
    if (!(a2 > 0))
      fail(ErrorCode::negative_quadratic_form,
           "alpha vanished on the trimmed interior");
    ap.dphi[i] = 1.0 / a2;
  }

  ap.phi = numerics::cumulative_integral(ap.dphi, grid.step());
  ap.tail_left = exp_tail(slice, ap.dphi.front(), ap.range.begin);
  ap.tail_right = exp_tail(slice, ap.dphi.back(), ap.range.end - 1);
  for (auto& v : ap.phi) v += ap.tail_left;  // phi extrapolates to 0 at x_min
  ap.phi_total = ap.phi.back() + ap.tail_right;

  // closed-form consistency, mod pi:
  //   phi = arctan[(1/2I + 2Ic^2) W u1/u2 - 2Ic] + arctan(2Ic)
  const auto m = coefficient_matrix(ap.params, pair.W);
  const double c = ap.params.c;
  const double shift = std::atan(2 * ap.params.I * c);
  std::size_t bad = 0, checked = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < ap.phi.size(); ++i) {
    const std::size_t gi = ap.range.begin + i;
    const double u2v = pair.u2[gi];
    if (u2v == 0.0) continue;
    const double arg = m.m11 * pair.W * pair.u1[gi] / u2v - 2 * ap.params.I * c;
    const double closed = std::atan(arg) + shift;
    double d = std::fmod(ap.phi[i] - closed, kPi);
    if (d < 0) d += kPi;
    d = std::min(d, kPi - d);
    worst = std::max(worst, d);
    ++checked;
    if (d > 1e-5) ++bad;
  }
  ap.mod_pi_max_dev = worst;
  if (checked > 0 && double(bad) / double(checked) > 1e-3)
    fail(ErrorCode::phase_unwrap_mismatch,
         "integrated phase disagrees with the closed form at " +
             std::to_string(bad) + " of " + std::to_string(checked) +
             " points");
  return ap;
}

std::vector<double> milne_residual(const SpatialGrid& grid,
                                   const EnergySlice& slice,
                                   const std::vector<double>& alpha,
                                   const TrimmedRange& range, double hbar) {
  const auto app = numerics::second_derivative(alpha, grid.step());
  std::vector<double> r(alpha.size(), 0.0);
  double floor_scale = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    floor_scale = std::max(
        floor_scale, std::abs(slice.p_squared[range.begin + i] * alpha[i]));
  const double eps = 1e-12 * floor_scale;
  const double h2 = hbar * hbar;
  for (std::size_t i = 2; i + 2 < alpha.size(); ++i) {
    const double a = alpha[i];
    const double p2 = slice.p_squared[range.begin + i];
    const double num = h2 * app[i] + p2 * a - h2 / (a * a * a);
    r[i] = num / std::max(std::abs(p2 * a), eps);
  }
  return r;
}

Reconstruction reconstruct_basis(const SpatialGrid& grid,
                                 const EnergySlice& slice,
                                 const BasisPair& pair,
                                 const AmplitudePhase& ap) {
  Reconstruction rec;
  const double root = std::sqrt(2.0 * pair.I);
  rec.u1.resize(ap.alpha.size());
  rec.g.resize(ap.alpha.size());
  for (std::size_t i = 0; i < ap.alpha.size(); ++i) {
    rec.u1[i] = root * ap.alpha[i] * std::sin(ap.phi[i]);
    rec.g[i] = root * ap.alpha[i] * std::cos(ap.phi[i]);
  }
  // single global scale fixed at the grid point nearest the potential minimum
  const std::size_t mid = std::clamp(grid.upper_index(0.5 * (slice.t1 + slice.t2)),
                                     ap.range.begin + 1, ap.range.end - 1) -
                          ap.range.begin;
  const double ref = rec.u1[mid];
  const double scale = (std::abs(ref) > 0) ? pair.u1[ap.range.begin + mid] / ref
                                           : 1.0;
  const auto g_direct = build_g(pair, ap.params.c);
  double umax = 0.0, gmax = 0.0;
  for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i) {
    umax = std::max(umax, std::abs(pair.u1[i]));
    gmax = std::max(gmax, std::abs(g_direct.values[i]));
  }
  for (std::size_t i = 0; i < rec.u1.size(); ++i) {
    rec.u1[i] *= scale;
    rec.g[i] *= scale;
    const std::size_t gi = ap.range.begin + i;
    if (gi < slice.allowed_begin || gi >= slice.allowed_end) continue;
    rec.max_rel_dev_u1 = std::max(
        rec.max_rel_dev_u1, std::abs(rec.u1[i] - pair.u1[gi]) / umax);
    rec.max_rel_dev_g = std::max(
        rec.max_rel_dev_g, std::abs(rec.g[i] - g_direct.values[gi]) / gmax);
  }
  if (rec.max_rel_dev_u1 > 1e-6 || rec.max_rel_dev_g > 1e-6)
    fail(ErrorCode::reconstruction_mismatch,
         "amplitude-phase reconstruction deviates from the stored basis");
  return rec;
}

std::vector<StationaryPoint> stationary_points(const SpatialGrid& grid,
                                               const EnergySlice& slice,
                                               const std::vector<double>& alpha,
                                               const TrimmedRange& range) {
  const double h = grid.step();
  std::vector<double> slope(alpha.size(), 0.0);
  for (std::size_t i = 1; i + 1 < alpha.size(); ++i)
    slope[i] = (alpha[i + 1] - alpha[i - 1]) / (2 * h);

  const std::size_t lo =
      std::max(grid.upper_index(slice.t1), range.begin + 1) - range.begin;
  const std::size_t hi =
      std::min(grid.upper_index(slice.t2), range.end - 1) - range.begin;
  double peak = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
    peak = std::max(peak, std::abs(slope[i]));
  const double dead = 1e-9 * peak;

  std::vector<StationaryPoint> pts;
  int prev = 0;
  double prev_slope = 0.0;
  double prev_x = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double s = slope[i];
    const int sign = s > dead ? 1 : (s < -dead ? -1 : 0);
    if (sign == 0) continue;
    const double x = grid.x(range.begin + i);
    if (prev != 0 && sign != prev) {
      // slope crosses zero between the two retained samples
      const double t = prev_slope / (prev_slope - s);
      StationaryPoint p;
      p.x = prev_x + t * (x - prev_x);
      p.kind = prev > 0 ? StationaryKind::maximum : StationaryKind::minimum;
      pts.push_back(p);
    }
    prev = sign;
    prev_slope = s;
    prev_x = x;
  }
  return pts;
}

CanonicalQ canonical_Q(const SpatialGrid& grid, const BasisPair& pair,
                       const ErmakovParams& params, const TrimmedRange& range) {
  (void)grid;
  const auto m = coefficient_matrix(params, pair.W);
  if (!(m.m11 > 0) || m.det() < -1e-13 * m.m11 * m.m22)
    fail(ErrorCode::negative_quadratic_form, "canonical_Q: M not positive");
  CanonicalQ out;
  const double tr = m.trace();
  const double diff = m.m11 - m.m22;
  const double disc = std::sqrt(diff * diff + 4 * m.m12 * m.m12);
  out.lambda1 = 0.5 * (tr + disc);
  out.lambda2 = 0.5 * (tr - disc);
  out.q.resize(range.size());
  out.w1sq.resize(range.size());
  out.w2sq.resize(range.size());
  if (disc <= 1e-14 * tr) {  // degenerate eigenvalues: Q is constant
    std::fill(out.q.begin(), out.q.end(), out.lambda1);
    std::fill(out.w1sq.begin(), out.w1sq.end(), 0.5);
    std::fill(out.w2sq.begin(), out.w2sq.end(), 0.5);
    return out;
  }
  const double theta = 0.5 * std::atan2(2 * m.m12, diff);
  const double ct = std::cos(theta), st = std::sin(theta);
  for (std::size_t i = 0; i < range.size(); ++i) {
    const double a = pair.u1[range.begin + i], b = pair.u2[range.begin + i];
    const double v1 = ct * a + st * b;
    const double v2 = -st * a + ct * b;
    const double norm = a * a + b * b;
    if (norm == 0.0) {
      out.w1sq[i] = out.w2sq[i] = 0.5;
      out.q[i] = 0.5 * tr;
      continue;
    }
    out.w1sq[i] = v1 * v1 / norm;
    out.w2sq[i] = v2 * v2 / norm;
    out.q[i] = out.lambda1 * out.w1sq[i] + out.lambda2 * out.w2sq[i];
  }
  return out;
}

InvertedPair inverted_pair(const SpatialGrid& grid, const EnergySlice& slice,
                           const BasisPair& pair, double I, double c_bar) {
  InvertedPair inv;
  inv.range = trimmed_interior(grid, slice, pair);
  const double cb = clamp_c(c_bar);
  const double a11 = 1.0 / (2 * I) + 2 * I * cb * cb;
  const double a22 = 2 * I / (pair.W * pair.W);
  const double a12 = 2 * I * cb / pair.W;  // note +: W[u2,u1] = -W
  inv.alpha_bar.resize(inv.range.size());
  std::vector<double> dbar(inv.range.size());
  for (std::size_t i = 0; i < inv.range.size(); ++i) {
    const std::size_t gi = inv.range.begin + i;
    const double a = pair.u1[gi], b = pair.u2[gi];
    const double q = a11 * b * b + a22 * a * a + 2 * a12 * a * b;
    if (!(q > 0))
      fail(ErrorCode::negative_quadratic_form,
           "inverted quadratic form not positive on the trimmed interior");
    inv.alpha_bar[i] = std::sqrt(q);
    dbar[i] = 1.0 / q;
  }
  // accumulate from the right: phibar(s2) = 0, increasing towards s2
  std::vector<double> rev(dbar.rbegin(), dbar.rend());
  auto acc = numerics::cumulative_integral(rev, grid.step());
  const double tail = exp_tail(slice, dbar.back(), inv.range.end - 1);
  inv.phi_bar.resize(inv.range.size());
  for (std::size_t i = 0; i < inv.range.size(); ++i)
    inv.phi_bar[i] = -(acc[inv.range.size() - 1 - i] + tail);
  return inv;
}

std::pair<double, double> c_band(const SpatialGrid& grid,
                                 const EnergySlice& slice,
                                 const BasisPair& pair, double I, double x) {
  if (!(x > slice.t1 && x < slice.t2))
    fail(ErrorCode::band_undefined, "c_band: x outside the turning points");
  const double u1 = sample_array(grid, pair.u1, x);
  const double u2 = sample_array(grid, pair.u2, x);
  double well_scale = 0.0;
  for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i)
    well_scale = std::max(well_scale, std::abs(pair.u1[i]));
  if (std::abs(u1) < 1e-12 * well_scale)
    fail(ErrorCode::band_undefined, "c_band: u1 vanishes at x");
  // p at x from the quadratic form of the slice samples
  const auto xs = grid.samples();
  const std::size_t c0 = std::clamp(grid.upper_index(x), std::size_t{3},
                                    grid.n_points - 3);
  const double p2x = numerics::interp_poly(
      std::span(xs).subspan(c0 - 3, 6),
      std::span(slice.p_squared).subspan(c0 - 3, 6), x);
  if (!(p2x > 0)) fail(ErrorCode::band_undefined, "c_band: p^2 <= 0 at x");
  const double p = std::sqrt(p2x);
  const double radicand = 2 * I * slice.hbar / p - u1 * u1;
  if (radicand < 0)
    fail(ErrorCode::band_undefined, "c_band: radicand negative at x");
  const double center = u2 / (pair.W * u1);
  const double half = std::sqrt(radicand) / (2 * I * std::abs(u1));
  return {center - half, center + half};
}

std::vector<double> phase_curvature_residual(const SpatialGrid& grid,
                                             const EnergySlice& slice,
                                             const AmplitudePhase& ap) {
  const double h = grid.step();
  const auto d1 = numerics::derivative(ap.phi, h);
  const auto d2 = numerics::second_derivative(ap.phi, h);
  const auto d3 = numerics::third_derivative(ap.phi, h);
  double d1max = 0.0;
  for (double v : d1) d1max = std::max(d1max, std::abs(v));
  std::vector<double> res(ap.phi.size(), 0.0);
  const double hb2 = slice.hbar * slice.hbar;
  for (std::size_t i = 3; i + 3 < ap.phi.size(); ++i) {
    if (std::abs(d1[i]) < 1e-12 * d1max) continue;  // derivative vanishes
    const double sch =
        d3[i] / d1[i] - 1.5 * (d2[i] / d1[i]) * (d2[i] / d1[i]);
    const double p2 = slice.p_squared[ap.range.begin + i];
    const double a2 = ap.alpha[i] * ap.alpha[i];
    const double lhs = 0.5 * hb2 * sch;
    const double rhs = p2 - hb2 / (a2 * a2);
    res[i] = (lhs - rhs) / std::max(std::abs(p2), 1e-12);
  }
  return res;
}

std::vector<double> basis_zeros(const SpatialGrid& grid,
                                const EnergySlice& slice,
                                const std::vector<double>& values) {
  std::vector<double> zeros;
  const auto xs = grid.samples();
  for (std::size_t i = slice.allowed_begin; i + 1 < slice.allowed_end; ++i) {
    if (values[i] == 0.0) {
      zeros.push_back(xs[i]);
      continue;
    }
    if (values[i] * values[i + 1] >= 0) continue;
    const std::size_t c0 = std::clamp(i, std::size_t{2}, grid.n_points - 4);
    auto xseg = std::span(xs).subspan(c0 - 2, 6);
    auto yseg = std::span(values).subspan(c0 - 2, 6);
    const double z = numerics::brent(
        [&](double x) { return numerics::interp_poly(xseg, yseg, x); },
        xs[i], xs[i + 1], 1e-15);
    zeros.push_back(z);
  }
  return zeros;
}

double sample_array(const SpatialGrid& grid, const std::vector<double>& values,
                    double x) {
  const auto xs = grid.samples();
  const std::size_t c0 =
      std::clamp(grid.upper_index(x), std::size_t{3}, grid.n_points - 3);
  return numerics::interp_poly(std::span(xs).subspan(c0 - 3, 6),
                               std::span(values).subspan(c0 - 3, 6), x);
}

}  // namespace milne
