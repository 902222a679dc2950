#ifndef MILNE_ERMAKOV_HPP
#define MILNE_ERMAKOV_HPP

#include <cstddef>
#include <vector>

#include "milne/domain.hpp"
#include "milne/schrodinger.hpp"

namespace milne {

struct ErmakovParams {
  double I = 1.0;
  double c = 0.0;
  static constexpr double c_max = 1e8;
};

/// Symmetric 2x2 coefficient matrix of the amplitude quadratic form.
/// det M = 1/W^2 holds identically.
struct CoefficientMatrix {
  double m11 = 0.0, m22 = 0.0, m12 = 0.0;
  /// Compensated difference of products; the plain expression loses the
  /// identity to cancellation once 4 I^2 c^2 is large.
  double det() const;
  double trace() const { return m11 + m22; }
};

CoefficientMatrix coefficient_matrix(const ErmakovParams& params, double W);

/// Contiguous index window of the grid on which amplitude/phase arrays live.
/// The window drops the outer region where either basis solution has grown
/// beyond 1e12 times its classically allowed scale (alpha diverging towards
/// the boundaries is represented by this truncation).
struct TrimmedRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past last
  std::size_t size() const { return end - begin; }
};

TrimmedRange trimmed_interior(const SpatialGrid& grid, const EnergySlice& slice,
                              const BasisPair& pair);

/// Amplitude alpha(x), unwrapped phase phi(x) (phi -> 0 at x_min) and
/// dphi = alpha^-2, on the trimmed interior.
struct AmplitudePhase {
  TrimmedRange range;
  std::vector<double> alpha;
  std::vector<double> phi;
  std::vector<double> dphi;
  ErmakovParams params;
  double phi_total = 0.0;        // phi at s2 including the forbidden tail
  double tail_left = 0.0;        // analytic tail corrections (reported)
  double tail_right = 0.0;
  double mod_pi_max_dev = 0.0;   // worst deviation from the closed form
};

std::vector<double> amplitude(const SpatialGrid& grid, const EnergySlice& slice,
                              const BasisPair& pair, const ErmakovParams& params,
                              const TrimmedRange& range);

/// Integrates dphi = alpha^-2 with a fourth-order cumulative rule and
/// validates the result (mod pi) against the closed-form arctan expression,
/// branch-matched at the zeros of u2. Throws PhaseUnwrapMismatch when more
/// than 0.1% of interior points deviate by over 1e-5.
AmplitudePhase phase(const SpatialGrid& grid, const EnergySlice& slice,
                     const BasisPair& pair, const ErmakovParams& params);

/// The non-oscillating superposition parameter, c_o = -sqrt(W^-2 - (2I)^-2).
/// positive_branch selects +|c_o|. Requires W^2 < 4 I^2.
double c_nonoscillating(double I, double W, bool positive_branch = false);

/// Normalized residual of the Milne equation
/// hbar^2 a'' + p^2 a = hbar^2 / a^3 over the trimmed interior (five-point
/// stencil margins excluded).
std::vector<double> milne_residual(const SpatialGrid& grid,
                                   const EnergySlice& slice,
                                   const std::vector<double>& alpha,
                                   const TrimmedRange& range, double hbar);

/// u1 = sqrt(2I) alpha sin(phi), g = sqrt(2I) alpha cos(phi); checks the
/// reconstruction against the stored pair (single global scale fixed at the
/// potential minimum) to 1e-6 relative max norm.
struct Reconstruction {
  std::vector<double> u1;
  std::vector<double> g;
  double max_rel_dev_u1 = 0.0;
  double max_rel_dev_g = 0.0;
};
Reconstruction reconstruct_basis(const SpatialGrid& grid,
                                 const EnergySlice& slice,
                                 const BasisPair& pair,
                                 const AmplitudePhase& ap);

enum class StationaryKind { minimum, maximum };
struct StationaryPoint {
  double x = 0.0;
  StationaryKind kind = StationaryKind::minimum;
};

/// Strict sign changes of the centered-difference slope of alpha inside
/// (t1, t2); slopes below 1e-9 of the peak slope are dead-banded.
std::vector<StationaryPoint> stationary_points(const SpatialGrid& grid,
                                               const EnergySlice& slice,
                                               const std::vector<double>& alpha,
                                               const TrimmedRange& range);

/// Canonical decomposition of the quadratic form on the unit circle.
struct CanonicalQ {
  double lambda1 = 0.0, lambda2 = 0.0;
  std::vector<double> q;
  std::vector<double> w1sq, w2sq;
};
CanonicalQ canonical_Q(const SpatialGrid& grid, const BasisPair& pair,
                       const ErmakovParams& params, const TrimmedRange& range);

/// Amplitude/phase with the phase accumulating from s2 leftward
/// (phibar(s2) = 0, dphibar = alphabar^-2 > 0, so phibar <= 0 inside).
struct InvertedPair {
  TrimmedRange range;
  std::vector<double> alpha_bar;
  std::vector<double> phi_bar;
};
InvertedPair inverted_pair(const SpatialGrid& grid, const EnergySlice& slice,
                           const BasisPair& pair, double I, double c_bar);

/// Admissible band of superposition parameters at a point strictly between
/// the turning points (diagnostic).
std::pair<double, double> c_band(const SpatialGrid& grid,
                                 const EnergySlice& slice,
                                 const BasisPair& pair, double I, double x);

/// Residual of the phase-curvature identity
/// (hbar^2/2) <phi; x> = p^2 - hbar^2 alpha^-4 (valid on both sides of the
/// turning points), normalized by |p^2|. Entries outside [first, last) of the
/// evaluation window are zero.
std::vector<double> phase_curvature_residual(const SpatialGrid& grid,
                                             const EnergySlice& slice,
                                             const AmplitudePhase& ap);

/// Zeros of the given basis component strictly between the turning points,
/// refined through a local six-point polynomial.
std::vector<double> basis_zeros(const SpatialGrid& grid,
                                const EnergySlice& slice,
                                const std::vector<double>& values);

/// Value of a grid-sampled array at x via the local six-point polynomial.
double sample_array(const SpatialGrid& grid, const std::vector<double>& values,
                    double x);

}  // namespace milne

#endif
