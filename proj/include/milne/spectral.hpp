#ifndef MILNE_SPECTRAL_HPP
#define MILNE_SPECTRAL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "milne/domain.hpp"
#include "milne/ermakov.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

enum class MapKind { analytic_harmonic, interpolated };

/// Eigenvalue list (n, E_n) together with the monotone continuation
/// n(E) = xi^{-1}(E). The analytic kind is exact for the harmonic well;
/// the interpolated kind is a shape-preserving cubic through (E_n, n).
class QuantumNumberMap {
 public:
  static QuantumNumberMap analytic_harmonic(double mass, double omega,
                                            double hbar, int n_max);
  static QuantumNumberMap interpolated(std::vector<double> eigenvalues);

  MapKind kind() const { return kind_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  /// n(E); OutOfRange for the interpolated kind beyond stored eigenvalues.
  double n_of(double E) const;
  double dn_dE(double E) const;
  /// xi(n): inverse of the continuation, defined for n in the covered range.
  double energy_at(double n_real) const;

 private:
  MapKind kind_ = MapKind::interpolated;
  std::vector<double> eigenvalues_;
  double mass_ = 1.0, omega_ = 1.0, hbar_ = 1.0;
  numerics::Pchip n_of_E_;
};

/// Locates E_0..E_{n_max} by scanning node counts of the right-regular
/// solution for brackets and refining the Wronskian zero W(E) = 0 with
/// Brent. Each root is solved on the given grid and its midpoint-refined
/// companion, then Richardson-extrapolated (the Numerov eigenvalue bias is
/// O(h^4)). Returns the analytic map for harmonic potentials unless
/// force_interpolated is set.
QuantumNumberMap find_eigenvalues(const PotentialSpec& potential,
                                  const SpatialGrid& grid, int n_max,
                                  bool force_interpolated = false);

double quantum_number(const QuantumNumberMap& map, double E);

/// c(E) = -(1/2I) cot(pi n(E)), clamped to |c| <= 1e8.
/// Throws EigenvalueDegenerate at integer n(E).
double c_of_energy(double I, const QuantumNumberMap& map, double E);

struct AccumulatedPhase {
  double E = 0.0;
  double phi_total = 0.0;
  double c_used = 0.0;
  double n_of_E = 0.0;
  double tail_correction = 0.0;
};

enum class CPolicy { nonosc, minus_nonosc, of_energy, fixed };

/// Full pipeline at one energy: slice, regular pair, balanced basis and
/// amplitude-phase arrays under the requested parameter policy.
struct PipelineResult {
  EnergySlice slice;
  LinearSolution raw_u1, raw_u2;
  BasisPair pair;
  AmplitudePhase ap;
  double c_used = 0.0;
  double n_of_E = 0.0;
};

PipelineResult run_amplitude_phase(const PotentialSpec& potential,
                                   const SpatialGrid& grid,
                                   const QuantumNumberMap& map, double E,
                                   double I, CPolicy policy,
                                   double c_fixed = 0.0);

/// The empirically labelled non-oscillating branch of +-c_o for this basis
/// (the sign whose amplitude has the fewer interior stationary points).
double nonoscillating_c(const SpatialGrid& grid, const EnergySlice& slice,
                        const BasisPair& pair);

AccumulatedPhase accumulated_phase(const PotentialSpec& potential,
                                   const SpatialGrid& grid,
                                   const QuantumNumberMap& map, double E,
                                   double I, CPolicy policy,
                                   double c_fixed = 0.0);

/// Winding-number evaluation of the phase increment over [x_from, x_upto]:
/// the rotation of the vector (g, u1) accumulated along the grid, anchored
/// at the actual arctan branch at x_from. Robust where integrating
/// alpha^-2 under-resolves the near-degenerate basis (|W| -> 0), where the
/// phase rises by pi across grid-unresolvably narrow steps. The window also
/// serves to exclude the far tails, where finite-energy-offset admixtures
/// flip the solution signs.
double winding_phase(const SpatialGrid& grid, const EnergySlice& slice,
                     const BasisPair& pair, const ErmakovParams& params,
                     double x_from, double x_upto);

/// Accumulated phase at an eigenvalue (integer n): the kappa rescale is
/// undefined there, so the phase comes from the winding formula on the
/// envelope-matched pair. The result is pi * (node count), c-independent.
AccumulatedPhase accumulated_phase_at_eigenvalue(const PotentialSpec& potential,
                                                 const SpatialGrid& grid,
                                                 const QuantumNumberMap& map,
                                                 double E, double I, double c);

struct NormalizationItem {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_dev = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct NormalizationReport {
  std::vector<NormalizationItem> items;
  bool all_passed() const;
};

/// The normalization/invariant relations:
///  (a) windowed norm identity:   int u1^2 dx = (hbar^2/2m) [u1' dE{u1} - u1 dE{u1'}]
///      at an eigenvalue (dE by centered difference over +-1e-4), plus the
///      I dE{phi} form of the same statement as a coarse companion;
///  (b) chain-rule identity:      I dE{c} (1/2I + 2Ic^2)^{-1} = I pi dE{n};
///  (c) unity normalization:      I = m / (hbar^2 pi dE{n}) (= m omega/(hbar pi));
///  (d) de Broglie form:          I = 2 pi [int lambda dx]^{-1} over the well.
NormalizationReport normalization_checks(const PotentialSpec& potential,
                                         const SpatialGrid& grid,
                                         const QuantumNumberMap& map, double I);

}  // namespace milne

#endif
