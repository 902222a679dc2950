#ifndef MILNE_DOMAIN_HPP
#define MILNE_DOMAIN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "milne/numerics.hpp"

namespace milne {

/// Strictly uniform spatial grid with an odd number of points, so composite
/// Simpson quadrature applies end to end.
struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 0;

  SpatialGrid() = default;
  SpatialGrid(double xmin, double xmax, std::size_t n);

  double step() const { return (x_max - x_min) / double(n_points - 1); }
  double x(std::size_t i) const { return x_min + double(i) * step(); }
  std::vector<double> samples() const;
  /// Index of the first grid point with x(i) > value.
  std::size_t upper_index(double value) const;
  /// Refined grid with the same span and 2n-1 points (every cell halved).
  SpatialGrid refined() const { return {x_min, x_max, 2 * n_points - 1}; }
};

enum class PotentialKind { harmonic, polynomial, tabulated };

/// Single-minimum potential well: harmonic, polynomial, or a tabulated
/// curve interpolated by a monotone (shape-preserving) cubic.
class PotentialSpec {
 public:
  static PotentialSpec harmonic(double mass, double omega, double hbar = 1.0);
  static PotentialSpec polynomial(std::vector<double> coeffs, double mass,
                                  double hbar = 1.0);
  static PotentialSpec tabulated(std::vector<double> xs, std::vector<double> vs,
                                 double mass, double hbar = 1.0);

  double operator()(double x) const;
  double mass() const { return mass_; }
  double hbar() const { return hbar_; }
  PotentialKind kind() const { return kind_; }
  double omega() const { return omega_; }

  /// Checks the single interior minimum invariant on the given grid (one
  /// falling-to-rising transition of the finite-difference slope); throws
  /// NoMinimum otherwise. Tabulated samples must cover the grid.
  void validate(const SpatialGrid& grid) const;

  /// Location of the potential minimum on the grid (refined off-grid).
  double minimum_location(const SpatialGrid& grid) const;

 private:
  PotentialKind kind_ = PotentialKind::harmonic;
  double mass_ = 1.0, hbar_ = 1.0, omega_ = 1.0;
  std::vector<double> coeffs_;
  numerics::Pchip table_;
  double table_lo_ = 0.0, table_hi_ = 0.0;
};

/// Kinematics at one energy: p^2(x) = 2m(E - V(x)) on the grid, plus the
/// bisection-refined turning points.
struct EnergySlice {
  double E = 0.0;
  std::vector<double> p_squared;
  double t1 = 0.0, t2 = 0.0;
  std::size_t allowed_begin = 0;  // first grid index with p^2 > 0
  std::size_t allowed_end = 0;    // one past the last index with p^2 > 0
  double buffer_efolds_left = 0.0;   // integral of |p|/hbar over [x_min, t1]
  double buffer_efolds_right = 0.0;  // same over [t2, x_max]
  double hbar = 1.0;
  double mass = 1.0;

  double p(std::size_t i) const;
  bool buffer_adequate() const {
    return buffer_efolds_left >= 5.0 && buffer_efolds_right >= 5.0;
  }
};

/// Samples p^2 at E and refines both turning points. E must lie above the
/// potential minimum and below the potential at both grid edges.
EnergySlice evaluate_energy_slice(const PotentialSpec& potential,
                                  const SpatialGrid& grid, double E);

/// Roots of E - V(x), refined between bracketing grid points to 1e-12
/// relative tolerance. Exactly two sign changes are required.
std::pair<double, double> find_turning_points(const PotentialSpec& potential,
                                              const SpatialGrid& grid,
                                              double E);

/// Local de Broglie wavelength 2*pi*hbar/p on the classically allowed range.
std::vector<double> local_de_broglie(const EnergySlice& slice);

}  // namespace milne

#endif
