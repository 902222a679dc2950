// Acceptance suite: runs the full invariant set on the reference model
// (harmonic well, m = 1, omega = 1, hbar = 1, grid [-12, 12] with 4001
// points) and prints one PASS/FAIL line per criterion. Exits nonzero if
// anything fails. The same checks back the CLI `check` subcommand.

#include <chrono>
#include <cstdio>

#include "milne/checks.hpp"
#include "milne/domain.hpp"

int main() {
  using namespace milne;
  const SpatialGrid grid(-12.0, 12.0, 4001);
  const auto potential = PotentialSpec::harmonic(1.0, 1.0, 1.0);

  const auto start = std::chrono::steady_clock::now();
  const auto results = run_all_checks(potential, grid);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  int failed = 0;
  for (const auto& r : results) {
    if (r.skipped) {
      std::printf("SKIP %-32s %s\n", r.name.c_str(), r.detail.c_str());
      continue;
    }
    if (!r.passed) ++failed;
    std::printf("%s %-32s %11.4e <= %9.2e  %s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.threshold, r.detail.c_str());
  }
  std::printf("%d of %zu checks failed (%.1f s)\n", failed, results.size(),
              secs);
  return failed == 0 ? 0 : 1;
}
