#pragma once

#include <cstdint>
#include <vector>

namespace rewire {

// Statistical acceptance thresholds and numerical tolerances, kept in one
// table so no check hard-codes its own constant.
namespace thresholds {
inline constexpr double kMinPValue = 1e-3;         // chi-square acceptance
inline constexpr double kSigmaEnvelope = 3.0;      // Monte Carlo deviation envelope
inline constexpr double kTolInequality = 1e-9;     // exact-arithmetic inequality slack
inline constexpr double kTolSemigroup = 1e-8;      // heat-kernel composition / majorization
inline constexpr double kTolDominance = 1e-6;      // time-stepped dominance checks
inline constexpr double kTolDerivativeRel = 1e-4;  // analytic vs finite-difference
inline constexpr double kMassTolEntry = 1e-12;     // mass vector entry floor
inline constexpr double kMassTolSum = 1e-10;       // mass vector sum window
}  // namespace thresholds

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  bool ok = false;  // p_value > thresholds::kMinPValue
};

// Pearson chi-square test of `counts` against the uniform law over its cells.
ChiSquareResult chi_square_uniform_test(const std::vector<std::uint64_t>& counts);

std::uint64_t factorial(int n);  // n <= 20

// Lehmer rank of a permutation of {0..n-1} in [0, n!), lexicographic.
std::uint64_t permutation_index(const std::vector<int>& perm);

// Monte Carlo standard error for a Bernoulli(p) mean over `replicas` trials,
// floored by one count so that p near 0 or 1 cannot shrink the envelope
// below the grid resolution: sqrt(p(1-p)R + 1)/R.
double bernoulli_sigma_floor(double p, std::uint64_t replicas);

}  // namespace rewire
