#include "support/reference.hpp"

#include <stdexcept>
#include <vector>

namespace milne::testing {

namespace {

// mismatch of u'/u between the left- and right-started marches at an
// off-centre match point, using the plain three-point scheme
// u_{i+1} = 2 u_i - u_{i-1} - h^2 k2_i u_i on a doubled grid
double shoot_mismatch(const PotentialSpec& potential, const SpatialGrid& grid,
                      double E) {
  const std::size_t n = 2 * grid.n_points - 1;
  const double h = (grid.x_max - grid.x_min) / double(n - 1);
  const double hbar = potential.hbar();
  std::vector<double> k2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x_min + double(i) * h;
    k2[i] = 2.0 * potential.mass() * (E - potential(x)) / (hbar * hbar);
  }
  // off-centre match point avoids the nodes of the symmetric eigenstates
  const std::size_t im = n / 2 + n / 10;

  std::vector<double> ul(n, 0.0), ur(n, 0.0);
  ul[1] = 1e-20;
  for (std::size_t i = 1; i <= im + 1; ++i) {
    ul[i + 1] = 2 * ul[i] - ul[i - 1] - h * h * k2[i] * ul[i];
    if (std::abs(ul[i + 1]) > 1e80)
      for (std::size_t j = 0; j <= i + 1; ++j) ul[j] *= 1e-80;
  }
  ur[n - 2] = 1e-20;
  for (std::size_t i = n - 2; i >= im - 1; --i) {
    ur[i - 1] = 2 * ur[i] - ur[i + 1] - h * h * k2[i] * ur[i];
    if (std::abs(ur[i - 1]) > 1e80)
      for (std::size_t j = i - 1; j < n; ++j) ur[j] *= 1e-80;
  }
  const double dl = (ul[im + 1] - ul[im - 1]) / (2 * h);
  const double dr = (ur[im + 1] - ur[im - 1]) / (2 * h);
  return dl / ul[im] - dr / ur[im];
}

}  // namespace

double shooting_oracle(const PotentialSpec& potential, const SpatialGrid& grid,
                       double e_lo, double e_hi) {
  // scan for a sign change of the mismatch away from its poles (where the
  // match-point value of either solution vanishes, the mismatch blows up)
  const int steps = 200;
  double a = 0, b = 0;
  bool found = false;
  double prev_e = e_lo, prev_f = shoot_mismatch(potential, grid, e_lo);
  for (int i = 1; i <= steps; ++i) {
    const double e = e_lo + (e_hi - e_lo) * double(i) / steps;
    const double f = shoot_mismatch(potential, grid, e);
    if (prev_f * f < 0 && std::abs(prev_f) < 1e2 && std::abs(f) < 1e2) {
      a = prev_e;
      b = e;
      found = true;
      break;
    }
    prev_e = e;
    prev_f = f;
  }
  if (!found) throw std::runtime_error("shooting oracle: no bracket");
  double fa = shoot_mismatch(potential, grid, a);
  for (int i = 0; i < 120 && b - a > 1e-11; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = shoot_mismatch(potential, grid, m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace milne::testing
