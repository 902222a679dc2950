#ifndef MILNE_CHECKS_HPP
#define MILNE_CHECKS_HPP

#include <string>
#include <vector>

#include "milne/domain.hpp"

namespace milne {

struct CheckResult {
  std::string name;
  bool skipped = false;
  bool passed = false;
  double measured = 0.0;   // worst observed deviation (or ratio, per check)
  double threshold = 0.0;  // pass bound on `measured`
  std::string detail;
};

/// Runs the full invariant suite on the given model. Checks that require
/// harmonic closed forms are skipped (with a reason) for other potentials.
std::vector<CheckResult> run_all_checks(const PotentialSpec& potential,
                                        const SpatialGrid& grid);

}  // namespace milne

#endif
