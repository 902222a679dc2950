#ifndef MILNE_TESTS_REFERENCE_HPP
#define MILNE_TESTS_REFERENCE_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "milne/domain.hpp"

namespace milne::testing {

/// Reference configuration used across the suite: harmonic well with
/// m = 1, omega = 1, hbar = 1 on [-12, 12] with 4001 points.
inline SpatialGrid reference_grid() { return SpatialGrid(-12.0, 12.0, 4001); }

inline PotentialSpec reference_potential() {
  return PotentialSpec::harmonic(1.0, 1.0, 1.0);
}

/// Independent bisection oracle on a continuous function; the companion to
/// the library's bracketing (kept deliberately primitive).
inline double bisect_oracle(const std::function<double(double)>& f, double a,
                            double b, double tol) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a < tol) break;
  }
  return 0.5 * (a + b);
}

/// Plain composite Simpson oracle over uniformly sampled values (odd count).
inline double simpson_oracle(const std::vector<double>& f, double h) {
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

/// Second-order shooting oracle for eigenvalues: integrates u'' = -p^2 u
/// with plain (non-Numerov) central differences from both edges on a doubled
/// grid and scans the log-derivative mismatch at the matching point for a
/// sign change. Independent of the production Numerov/Wronskian path.
double shooting_oracle(const PotentialSpec& potential, const SpatialGrid& grid,
                       double e_lo, double e_hi);

}  // namespace milne::testing

#endif
