#ifndef MILNE_SEMICLASSICAL_HPP
#define MILNE_SEMICLASSICAL_HPP

#include <cstddef>
#include <vector>

#include "milne/domain.hpp"
#include "milne/ermakov.hpp"
#include "milne/spectral.hpp"

namespace milne {

/// Reduced action S(x) = int_{t1}^{x} p dx' on the classically allowed grid
/// window, with the square-root endpoint segments handled analytically.
struct ReducedAction {
  std::size_t begin = 0;  // first allowed grid index
  std::vector<double> S;
  std::vector<double> dS;  // = p on the window
  double origin = 0.0;     // t1
  double total = 0.0;      // S(t2), half the loop integral
};

ReducedAction reduced_action(const SpatialGrid& grid, const EnergySlice& slice);

/// WKB basis on the caustic-trimmed allowed range (trim delta = 0.1 (t2-t1)):
///   u1~ = sqrt(2 I hbar/p) sin(S/hbar + pi/4)
///   u2~ = sqrt(2 I hbar/p) cos(S/hbar + pi/4 + arccos(W/2I))
/// The pi/4 phase makes u1~ the interior asymptotic form of the
/// left-regular solution.
struct WkbPair {
  std::size_t begin = 0;
  std::vector<double> u1;
  std::vector<double> u2;
  double I = 1.0;
  double W = 0.0;
};

WkbPair wkb_pair(const SpatialGrid& grid, const EnergySlice& slice,
                 const ReducedAction& action, double I, double W);

/// Schwarzian derivative f'''/f' - (3/2)(f''/f')^2 by five/seven-point
/// stencils; entries where |f'| < 1e-12 max|f'| are flagged by NaN-free
/// zeroing and reported via the mask.
struct SchwarzianResult {
  std::vector<double> values;
  std::vector<bool> valid;
};
SchwarzianResult schwarzian(const std::vector<double>& f, double h);

/// Semiclassical superposition on the WKB window. At c = c_o the amplitude
/// collapses to sqrt(hbar/p) and the phase to S/hbar (matched at the left
/// edge of the window).
struct SemiclassicalAmpPhase {
  std::size_t begin = 0;
  std::vector<double> alpha;
  std::vector<double> phi;
  std::vector<double> dphi;
};
SemiclassicalAmpPhase semiclassical_amp_phase(const SpatialGrid& grid,
                                              const EnergySlice& slice,
                                              const ReducedAction& action,
                                              const WkbPair& pair, double c);

/// Terms of the small-hbar expansion u = a exp(i f/hbar) truncated at the
/// requested even order (0 or 2): f0 = S, a0 = (dS)^{-1/2}, and for order 2
///   f2' = a0''/(2 a0 f0'),
///   a2  = -[int (2 a0' f2' + a0 f2'')/sqrt(f0') dy] / (2 sqrt(f0'))
/// with the homogeneous coefficients b_j zeroed for j >= 2.
struct ExpansionTerms {
  std::size_t begin = 0;
  int order = 0;
  double hbar_eff = 1.0;
  std::vector<double> a0, f0, f2, a2;
};

ExpansionTerms hbar_expansion(const SpatialGrid& grid, const EnergySlice& slice,
                              const ReducedAction& action, double hbar_eff,
                              int order);

/// Reconstruction (a0 + hbar^2 a2) sin(f0/hbar + hbar f2) truncated at
/// terms.order, and its Schrodinger-equation residual. The scalar metric is
/// the demodulated residual envelope sqrt(R^2 + (hbar R'/p)^2), normalized
/// by max |p^2 u|, maximized over the central half of the well (the
/// envelope form removes the antinode-sampling dependence of a plain max).
struct ExpansionResidual {
  std::vector<double> u;
  std::vector<double> residual;
  double midwell_envelope_norm = 0.0;
};
ExpansionResidual expansion_residual(const SpatialGrid& grid,
                                     const EnergySlice& slice,
                                     const ExpansionTerms& terms);

/// Max relative deviation from the exact left-regular solution over the
/// central half of the well, after a linear least-squares fit of the
/// envelope * {sin, cos} pair (absorbing overall amplitude and phase).
double expansion_error_vs_exact(const SpatialGrid& grid,
                                const EnergySlice& slice,
                                const ExpansionTerms& terms);

/// Phase of the truncated expansion through the superposition closed form:
/// phi = arccot{ cot(f0/hbar + hbar f2) - [2Ic + I W^-1 (4 - W^2/I^2)^(1/2)] },
/// branch-unwrapped at the cotangent poles. The bracket vanishes
/// identically at c = c_o.
struct ExpandedPhase {
  std::vector<double> phi;
  double bracket = 0.0;
};
ExpandedPhase expanded_phase(const ExpansionTerms& terms, double I, double W,
                             double c);

struct ActionIntegrals {
  double E = 0.0;
  double n_of_E = 0.0;
  double J_classical = 0.0;   // loop integral of dS
  double J_quantal_co = 0.0;  // 2 hbar phi(s2) at c = c(E)
  double period = 0.0;        // dE J_classical
};

ActionIntegrals action_integrals(const PotentialSpec& potential,
                                 const SpatialGrid& grid,
                                 const QuantumNumberMap& map, double E,
                                 double I);

/// Loop integral 2 hbar phi(s2) at a fixed superposition parameter;
/// integer multiples of 2 pi hbar at eigenvalues, where the degenerate
/// winding path is used automatically.
double quantal_action(const PotentialSpec& potential, const SpatialGrid& grid,
                      const QuantumNumberMap& map, double E, double I, double c);

}  // namespace milne

#endif
