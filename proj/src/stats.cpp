#include "rewire/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace rewire {

ChiSquareResult chi_square_uniform_test(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi-square needs at least two cells");
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("chi-square needs observations");
  const double expected = static_cast<double>(total) / counts.size();

  ChiSquareResult result;
  for (std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    result.statistic += diff * diff / expected;
  }
  result.dof = static_cast<int>(counts.size()) - 1;
  const boost::math::chi_squared dist(result.dof);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  result.ok = result.p_value > thresholds::kMinPValue;
  return result;
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial out of uint64 range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t permutation_index(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  if (n > 20) throw std::invalid_argument("permutation rank out of uint64 range");
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smaller_after;
    }
    rank += smaller_after * factorial(n - 1 - i);
  }
  return rank;
}

double bernoulli_sigma_floor(double p, std::uint64_t replicas) {
  if (replicas == 0) throw std::invalid_argument("sigma floor needs replicas > 0");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be a probability");
  const double r = static_cast<double>(replicas);
  return std::sqrt(p * (1.0 - p) * r + 1.0) / r;
}

}  // namespace rewire
