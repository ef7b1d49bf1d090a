#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isoball {

struct LemmaSuiteConfig {
  /// Cell size as a fraction of R: h = R / resolution_divisor.
  double resolution_divisor = 200.0;
  std::uint64_t seed = 1;
  int random_bodies = 50;
  /// Volume of the lens bodies.
  double lens_eps = 0.2;
  int threads = 0;
};

struct LemmaCheck {
  std::string lemma;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

struct LemmaReport {
  double h = 0.0;
  std::vector<LemmaCheck> checks;

  bool all_passed() const;
  /// First check that neither passed nor was skipped; nullptr if none.
  const LemmaCheck* first_failure() const;
};

/// Halving, reflection, incidence, quarter and sector checks on lens, ball
/// and seeded random bodies (3-D voxels) and polygon lenses (2-D).
LemmaReport run_lemma_suite(const LemmaSuiteConfig& config);

} // namespace isoball
