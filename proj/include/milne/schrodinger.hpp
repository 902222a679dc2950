#ifndef MILNE_SCHRODINGER_HPP
#define MILNE_SCHRODINGER_HPP

#include <cstddef>
#include <vector>

#include "milne/domain.hpp"

namespace milne {

enum class RegularEnd { left, right };

/// One solution of hbar^2 u'' + p^2 u = 0, regular at the chosen grid edge,
/// produced by an inward Numerov march. values are rescaled so max|u| = 1;
/// log_scale accumulates the rescaling exponents applied along the way.
struct LinearSolution {
  std::vector<double> values;
  std::vector<double> derivative;  // centered differences, one-sided at edges
  RegularEnd regular_end = RegularEnd::left;
  int node_count = 0;  // strict sign changes strictly between turning points
  double log_scale = 0.0;
};

/// Regular basis pair after rescaling. u1 and u2 carry the balanced
/// (energy-normalized) amplitude scale; W is the stored Wronskian
/// (d u1)u2 - u1(d u2), which rescale_basis pins to 2 I sin(pi n(E)).
struct BasisPair {
  std::vector<double> u1;
  std::vector<double> u2;
  double W = 0.0;
  double I = 1.0;
  double n_of_E = 0.0;
  double lambda_balance = 1.0;  // ripple-minimizing scale applied to u1
};

/// Auxiliary solution g = 2I(u2/W - c u1), lagging u1 by a quarter period.
struct GFunction {
  std::vector<double> values;
  double c = 0.0;
};

/// Numerov march from the chosen edge inward. Starting values are 0 at the
/// edge node and 1e-30 at its neighbour; whenever the running values exceed
/// 1e100 both are scaled down by 1e-100.
LinearSolution integrate_regular(const SpatialGrid& grid,
                                 const EnergySlice& slice, RegularEnd side,
                                 double hbar_override = 0.0);

/// Wronskian from O(h^4) derivative stencils at the five interior points
/// nearest the potential minimum, averaged; also counts nodes of u2.
/// Throws InconsistentWronskian when the relative spread exceeds 1e-4.
std::pair<double, int> wronskian_and_nodes(const SpatialGrid& grid,
                                           const EnergySlice& slice,
                                           const LinearSolution& u1,
                                           const LinearSolution& u2);

/// Builds the balanced pair: u1 and u2 are first matched to the
/// energy-normalized WKB envelope sqrt(2 I hbar / p), then u2 is multiplied
/// by kappa = 2 I sin(pi n_of_E)/W_raw so the stored Wronskian is exactly
/// 2 I sin(pi n(E)), and finally the residual amplitude imbalance is removed
/// by minimizing the mid-well ripple of alpha^2(c_o) (a W-preserving
/// u1*lambda, u2/lambda polish). Requires non-integer n_of_E.
BasisPair rescale_basis(const SpatialGrid& grid, const EnergySlice& slice,
                        const LinearSolution& u1, const LinearSolution& u2,
                        double I, double n_of_E);

/// Degenerate-energy variant: both solutions are envelope-matched but the
/// Wronskian is left at its (near-zero) measured value. Used at eigenvalues
/// where sin(pi n(E)) vanishes and the kappa rescale is undefined.
BasisPair rescale_basis_at_eigenvalue(const SpatialGrid& grid,
                                      const EnergySlice& slice,
                                      const LinearSolution& u1,
                                      const LinearSolution& u2, double I,
                                      double n_of_E);

GFunction build_g(const BasisPair& pair, double c);

/// Strict sign changes of `values` strictly between the turning points.
int count_nodes(const SpatialGrid& grid, const EnergySlice& slice,
                const std::vector<double>& values);

/// Wronskian of two arrays via O(h^4) stencils at the five interior points
/// nearest x0, averaged. Returns {mean, relative spread}.
std::pair<double, double> wronskian_at(const SpatialGrid& grid, double x0,
                                       const std::vector<double>& a,
                                       const std::vector<double>& b);

}  // namespace milne

#endif
