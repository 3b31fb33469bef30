#ifndef MOYALSPIN_CHECKS_HPP
#define MOYALSPIN_CHECKS_HPP

// Self-verification suites used by the command-line scenarios.

#include <moyalspin/spin_core.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace moyalspin {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  // Informational checks are reported but do not fail a suite.
  bool required = true;
};

inline constexpr double kAlgebraTolerance = 1e-12;
inline constexpr double kStarTolerance = 1e-10;

// Schwinger algebra, displacement relations and quantizer properties for K.
std::vector<CheckResult> quantizer_checks(const DiscreteKernel& K);

// Star product and twisted convolution against dense matrix products on
// `pairs` random operator pairs.
std::vector<CheckResult> star_checks(const DiscreteKernel& K, int pairs,
                                     std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

// Random dense operator with standard normal real and imaginary parts.
CMatrix random_operator(int dim, std::uint64_t& state);

}  // namespace moyalspin

#endif
