#include "milne/domain.hpp"

#include <algorithm>
#include <cmath>

#include "milne/errors.hpp"

namespace milne {

SpatialGrid::SpatialGrid(double xmin, double xmax, std::size_t n)
    : x_min(xmin), x_max(xmax), n_points(n) {
  if (!(xmin < xmax)) fail(ErrorCode::config_invalid, "grid: x_min >= x_max");
  if (n < 5) fail(ErrorCode::config_invalid, "grid: need at least 5 points");
  if (n % 2 == 0)
    fail(ErrorCode::config_invalid,
         "grid: n_points must be odd for end-to-end Simpson quadrature");
}

std::vector<double> SpatialGrid::samples() const {
  std::vector<double> xs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
  return xs;
}

std::size_t SpatialGrid::upper_index(double value) const {
  if (value < x_min) return 0;
  if (value >= x_max) return n_points;
  auto idx = std::size_t(std::ceil((value - x_min) / step()));
  while (idx < n_points && x(idx) <= value) ++idx;
  return idx;
}

PotentialSpec PotentialSpec::harmonic(double mass, double omega, double hbar) {
  if (mass <= 0 || omega <= 0 || hbar <= 0)
    fail(ErrorCode::config_invalid, "harmonic: m, omega, hbar must be > 0");
  PotentialSpec p;
  p.kind_ = PotentialKind::harmonic;
  p.mass_ = mass;
  p.omega_ = omega;
  p.hbar_ = hbar;
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coeffs, double mass,
                                        double hbar) {
  if (mass <= 0 || hbar <= 0)
    fail(ErrorCode::config_invalid, "polynomial: m, hbar must be > 0");
  if (coeffs.empty())
    fail(ErrorCode::config_invalid, "polynomial: empty coefficient list");
  PotentialSpec p;
  p.kind_ = PotentialKind::polynomial;
  p.mass_ = mass;
  p.hbar_ = hbar;
  p.coeffs_ = std::move(coeffs);
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> xs,
                                       std::vector<double> vs, double mass,
                                       double hbar) {
  if (mass <= 0 || hbar <= 0)
    fail(ErrorCode::config_invalid, "tabulated: m, hbar must be > 0");
  if (xs.size() < 4)
    fail(ErrorCode::config_invalid, "tabulated: need at least 4 samples");
  PotentialSpec p;
  p.kind_ = PotentialKind::tabulated;
  p.mass_ = mass;
  p.hbar_ = hbar;
  p.table_lo_ = xs.front();
  p.table_hi_ = xs.back();
  p.table_ = numerics::Pchip(std::move(xs), std::move(vs));
  return p;
}

double PotentialSpec::operator()(double x) const {
  switch (kind_) {
    case PotentialKind::harmonic:
      return 0.5 * mass_ * omega_ * omega_ * x * x;
    case PotentialKind::polynomial: {
      double v = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        v = v * x + *it;
      return v;
    }
    case PotentialKind::tabulated:
      return table_(x);
  }
  return 0.0;
}

void PotentialSpec::validate(const SpatialGrid& grid) const {
  if (kind_ == PotentialKind::tabulated &&
      (table_lo_ > grid.x_min || table_hi_ < grid.x_max))
    fail(ErrorCode::config_invalid,
         "tabulated potential does not cover the grid");
  // one falling-to-rising transition of the slope, strictly interior
  int transitions = 0;
  int prev_sign = 0;
  for (std::size_t i = 0; i + 1 < grid.n_points; ++i) {
    const double dv = (*this)(grid.x(i + 1)) - (*this)(grid.x(i));
    const int s = dv > 0 ? 1 : (dv < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev_sign < 0 && s > 0) ++transitions;
    if (prev_sign > 0 && s < 0)
      fail(ErrorCode::no_minimum, "potential has an interior maximum");
    prev_sign = s;
  }
  if (transitions != 1)
    fail(ErrorCode::no_minimum,
         "potential must have exactly one interior minimum on the grid");
}

double PotentialSpec::minimum_location(const SpatialGrid& grid) const {
  std::size_t best = 0;
  double vbest = (*this)(grid.x(0));
  for (std::size_t i = 1; i < grid.n_points; ++i) {
    const double v = (*this)(grid.x(i));
    if (v < vbest) { vbest = v; best = i; }
  }
  if (best == 0 || best + 1 == grid.n_points) return grid.x(best);
  // parabola through the bracketing triple
  const double h = grid.step();
  const double vm = (*this)(grid.x(best - 1)), vp = (*this)(grid.x(best + 1));
  const double denom = vm - 2 * vbest + vp;
  if (denom <= 0) return grid.x(best);
  return grid.x(best) + 0.5 * h * (vm - vp) / denom;
}

double EnergySlice::p(std::size_t i) const {
  const double p2 = p_squared[i];
  return p2 > 0 ? std::sqrt(p2) : 0.0;
}

std::pair<double, double> find_turning_points(const PotentialSpec& potential,
                                              const SpatialGrid& grid,
                                              double E) {
  auto f = [&](double x) { return E - potential(x); };
  std::vector<std::size_t> brackets;
  double prev = f(grid.x(0));
  for (std::size_t i = 1; i < grid.n_points; ++i) {
    const double cur = f(grid.x(i));
    if (prev * cur < 0 || (prev == 0.0 && cur != 0.0)) brackets.push_back(i);
    prev = cur;
  }
  if (brackets.size() != 2)
    fail(ErrorCode::degenerate_turning_points,
         "expected exactly two turning points, found " +
             std::to_string(brackets.size()));
  auto refine = [&](std::size_t i) {
    return numerics::bisect(f, grid.x(i - 1), grid.x(i), 1e-12);
  };
  return {refine(brackets[0]), refine(brackets[1])};
}

EnergySlice evaluate_energy_slice(const PotentialSpec& potential,
                                  const SpatialGrid& grid, double E) {
  potential.validate(grid);
  const double v_lo = potential(grid.x_min), v_hi = potential(grid.x_max);
  if (E >= v_lo || E >= v_hi)
    fail(ErrorCode::energy_out_of_range,
         "E reaches the potential at a grid edge (no forbidden buffer)");

  EnergySlice s;
  s.E = E;
  s.hbar = potential.hbar();
  s.mass = potential.mass();
  s.p_squared.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double p2 = 2.0 * potential.mass() * (E - potential(grid.x(i)));
    if (!std::isfinite(p2))
      fail(ErrorCode::non_finite_input, "p^2 is not finite on the grid");
    s.p_squared[i] = p2;
  }
  auto [t1, t2] = find_turning_points(potential, grid, E);
  s.t1 = t1;
  s.t2 = t2;
  s.allowed_begin = grid.upper_index(t1);
  s.allowed_end = grid.upper_index(t2);
  if (s.allowed_begin + 8 > s.allowed_end)
    fail(ErrorCode::degenerate_turning_points,
         "turning points too close to resolve on this grid (E at or just "
         "above the potential minimum)");

  // forbidden-region depth in e-foldings of the regular solutions
  const double h = grid.step();
  auto efolds = [&](std::size_t first, std::size_t last) {
    double acc = 0.0;
    for (std::size_t i = first; i + 1 <= last; ++i) {
      const double a = std::sqrt(std::max(-s.p_squared[i], 0.0));
      const double b = std::sqrt(std::max(-s.p_squared[i + 1], 0.0));
      acc += 0.5 * (a + b) * h;
    }
    return acc / s.hbar;
  };
  s.buffer_efolds_left = efolds(0, s.allowed_begin > 0 ? s.allowed_begin - 1 : 0);
  s.buffer_efolds_right = efolds(s.allowed_end, grid.n_points - 1);
  return s;
}

std::vector<double> local_de_broglie(const EnergySlice& slice) {
  std::vector<double> lam;
  lam.reserve(slice.allowed_end - slice.allowed_begin);
  constexpr double two_pi = 6.283185307179586476925287;
  for (std::size_t i = slice.allowed_begin; i < slice.allowed_end; ++i)
    lam.push_back(two_pi * slice.hbar / std::sqrt(slice.p_squared[i]));
  return lam;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::energy_out_of_range: return "EnergyOutOfRange";
    case ErrorCode::no_minimum: return "NoMinimum";
    case ErrorCode::degenerate_turning_points: return "DegenerateTurningPoints";
    case ErrorCode::non_finite_input: return "NonFiniteInput";
    case ErrorCode::overflow: return "Overflow";
    case ErrorCode::inconsistent_wronskian: return "InconsistentWronskian";
    case ErrorCode::eigenvalue_degenerate: return "EigenvalueDegenerate";
    case ErrorCode::negative_quadratic_form: return "NegativeQuadraticForm";
    case ErrorCode::phase_unwrap_mismatch: return "PhaseUnwrapMismatch";
    case ErrorCode::reconstruction_mismatch: return "ReconstructionMismatch";
    case ErrorCode::inverted_mismatch: return "InvertedMismatch";
    case ErrorCode::band_undefined: return "BandUndefined";
    case ErrorCode::arccos_domain: return "ArccosDomain";
    case ErrorCode::derivative_vanishes: return "DerivativeVanishes";
    case ErrorCode::bracket_not_found: return "BracketNotFound";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::reality_violated: return "RealityViolated";
    case ErrorCode::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace milne
