#include "rewire/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rewire/interchange.hpp"

namespace rewire {

namespace {

constexpr int kNoValue = std::numeric_limits<int>::max();

// Flattened loopless neighbor lists (self-loops never affect cuts).
struct FlatAdj {
  std::vector<int> offs;
  std::vector<int> nbr;

  static FlatAdj build(const PhaseGraph& g) {
    FlatAdj a;
    a.offs.assign(g.n + 1, 0);
    for (const auto& [u, v] : g.edges) {
      if (u == v) continue;
      ++a.offs[u + 1];
      ++a.offs[v + 1];
    }
    for (int i = 0; i < g.n; ++i) a.offs[i + 1] += a.offs[i];
    a.nbr.resize(a.offs[g.n]);
    std::vector<int> cursor(a.offs.begin(), a.offs.end() - 1);
    for (const auto& [u, v] : g.edges) {
      if (u == v) continue;
      a.nbr[cursor[u]++] = v;
      a.nbr[cursor[v]++] = u;
    }
    return a;
  }
};

struct SizeMinima {
  std::vector<int> boundary;            // index 1..kmax
  std::vector<std::uint64_t> witness;

  explicit SizeMinima(int kmax)
      : boundary(kmax + 1, kNoValue), witness(kmax + 1, 0) {}

  void update(int size, int b, std::uint64_t mask) {
    if (b < boundary[size] || (b == boundary[size] && mask < witness[size])) {
      boundary[size] = b;
      witness[size] = mask;
    }
  }

  void merge(const SizeMinima& other) {
    for (std::size_t s = 1; s < boundary.size(); ++s) {
      if (other.boundary[s] == kNoValue) continue;
      update(static_cast<int>(s), other.boundary[s], other.witness[s]);
    }
  }
};

int boundary_delta_add(const FlatAdj& adj, int v, std::uint64_t mask) {
  int delta = 0;
  for (int t = adj.offs[v]; t < adj.offs[v + 1]; ++t) {
    delta += ((mask >> adj.nbr[t]) & 1) ? -1 : +1;
  }
  return delta;
}

// Depth-first extension over nodes [first, limit), increasing order; visits
// every subset exactly once with an O(degree) boundary delta per step.
void extend(const FlatAdj& adj, int limit, int kmax, int first, int size, int boundary,
            std::uint64_t mask, SizeMinima& minima) {
  if (size > 0) minima.update(size, boundary, mask);
  if (size == kmax) return;
  for (int v = first; v < limit; ++v) {
    extend(adj, limit, kmax, v + 1, size + 1, boundary + boundary_delta_add(adj, v, mask),
           mask | (1ULL << v), minima);
  }
}

IsoProfile assemble_profile(int n, int kmax, const SizeMinima& minima) {
  IsoProfile p;
  p.n = n;
  p.kmax = kmax;
  p.phi_size.assign(kmax + 1, 0);
  p.phi_card.assign(kmax + 1, 0);
  p.phi_ratio.assign(kmax + 1, 0.0);
  p.phi_ratio_frac.assign(kmax + 1, {0, 1});
  p.witness_card.assign(kmax + 1, 0);
  p.witness_ratio.assign(kmax + 1, 0);

  int best_card = kNoValue;
  std::uint64_t best_card_witness = 0;
  long long best_num = 1;  // ratio numerator (boundary)
  long long best_den = 0;  // ratio denominator (size); 0 == +infinity
  std::uint64_t best_ratio_witness = 0;

  for (int k = 1; k <= kmax; ++k) {
    if (minima.boundary[k] == kNoValue) {
      throw std::logic_error("profile enumeration missed a subset size");
    }
    p.phi_size[k] = minima.boundary[k];
    if (minima.boundary[k] < best_card) {
      best_card = minima.boundary[k];
      best_card_witness = minima.witness[k];
    }
    p.phi_card[k] = best_card;
    p.witness_card[k] = best_card_witness;

    const long long num = minima.boundary[k];
    const long long den = k;
    // num/den < best_num/best_den  <=>  num*best_den < best_num*den
    if (best_den == 0 || num * best_den < best_num * den) {
      best_num = num;
      best_den = den;
      best_ratio_witness = minima.witness[k];
    }
    p.phi_ratio[k] = static_cast<double>(best_num) / static_cast<double>(best_den);
    p.phi_ratio_frac[k] = {static_cast<int>(best_num), static_cast<int>(best_den)};
    p.witness_ratio[k] = best_ratio_witness;
  }
  return p;
}

void check_profile_args(const PhaseGraph& graph, int kmax, int budget) {
  if (graph.n > budget) {
    throw std::invalid_argument(
        "exact profile enumeration refused: graph exceeds the node budget (" +
        std::to_string(graph.n) + " > " + std::to_string(budget) +
        "); raise ProfileOptions::budget explicitly if the runtime cost is intended");
  }
  if (kmax < 1 || kmax > graph.n / 2) {
    throw std::invalid_argument("profile kmax must satisfy 1 <= kmax <= n/2");
  }
}

}  // namespace

IsoProfile profile_exact(const PhaseGraph& graph, int kmax, const ProfileOptions& options) {
  check_profile_args(graph, kmax, options.budget);
  const FlatAdj adj = FlatAdj::build(graph);
  const int n = graph.n;

  // Strata fix the membership pattern of the top `top_bits` nodes.
  const int top_bits = std::clamp(n - 16, 0, 10);
  const int limit = n - top_bits;
  const int strata = 1 << top_bits;

  std::vector<SizeMinima> partial(strata, SizeMinima(kmax));
#pragma omp parallel for schedule(dynamic) if (options.parallel && strata > 1)
  for (int s = 0; s < strata; ++s) {
    std::uint64_t base_mask = 0;
    int base_size = 0;
    int base_boundary = 0;
    bool feasible = true;
    for (int b = 0; b < top_bits; ++b) {
      if ((s >> b) & 1) {
        const int v = limit + b;
        if (++base_size > kmax) {
          feasible = false;
          break;
        }
        base_boundary += boundary_delta_add(adj, v, base_mask);
        base_mask |= 1ULL << v;
      }
    }
    if (feasible) {
      extend(adj, limit, kmax, 0, base_size, base_boundary, base_mask, partial[s]);
    }
  }

  SizeMinima minima(kmax);
  for (const SizeMinima& part : partial) minima.merge(part);
  return assemble_profile(n, kmax, minima);
}

IsoProfile profile_exact_serial(const PhaseGraph& graph, int kmax, int budget) {
  check_profile_args(graph, kmax, budget);
  const FlatAdj adj = FlatAdj::build(graph);
  const int n = graph.n;

  SizeMinima minima(kmax);
  std::uint64_t mask = 0;
  int size = 0;
  int boundary = 0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int v = __builtin_ctzll(g);  // bit toggled between consecutive codes
    const std::uint64_t next = g ^ (g >> 1);
    if ((next >> v) & 1) {
      boundary += boundary_delta_add(adj, v, mask);
      mask = next;
      ++size;
    } else {
      mask = next;
      boundary -= boundary_delta_add(adj, v, mask);
      --size;
    }
    if (size >= 1 && size <= kmax) minima.update(size, boundary, mask);
  }
  return assemble_profile(n, kmax, minima);
}

double ExpansionHypothesis::floor_at(double k) const { return std::min(gamma * k, d); }

void ExpansionHypothesis::validate() const {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("hypothesis gamma must lie in (0,1)");
  }
  if (!(d >= 1.0)) throw std::invalid_argument("hypothesis d must be >= 1");
}

HypothesisReport check_hypothesis(const IsoProfile& profile, const ExpansionHypothesis& hyp) {
  hyp.validate();
  HypothesisReport report;
  for (int k = 1; k <= profile.kmax; ++k) {
    const double required = hyp.floor_at(k);
    if (static_cast<double>(profile.phi_card[k]) < required) {
      report.holds = false;
      report.first_violation_k = k;
      report.witness_mask = profile.witness_card[k];
      report.required = required;
      report.observed = profile.phi_card[k];
      return report;
    }
  }
  return report;
}

namespace {

__int128 binomial128(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;  // exact: prefix products are binomials
  }
  return result;
}

}  // namespace

std::uint64_t count_arc_sets(int n, int k, int l) {
  if (n < 3) throw std::invalid_argument("arc counting requires n >= 3");
  if (k < 1 || k > n - 1) throw std::invalid_argument("arc counting requires 1 <= k <= n-1");
  if (l < 1) throw std::invalid_argument("arc counting requires l >= 1");
  if (l > k || l > n - k) return 0;
  const __int128 raw =
      static_cast<__int128>(n) * binomial128(k - 1, l - 1) * binomial128(n - k - 1, l - 1);
  const __int128 result = raw / l;  // always integral: see the partition test
  if (result * l != raw) throw std::logic_error("arc-set count was not integral");
  if (result > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("arc-set count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// All compositions of total into parts positive parts, lexicographic.
void compositions(int total, int parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    if (total >= 1) {
      current.push_back(total);
      out.push_back(current);
      current.pop_back();
    }
    return;
  }
  for (int first = 1; first + (parts - 1) <= total; ++first) {
    current.push_back(first);
    compositions(total - first, parts - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::uint64_t> enumerate_arc_sets(int n, int k, int l) {
  if (n > 32) throw std::invalid_argument("arc-set enumeration limited to n <= 32");
  if (count_arc_sets(n, k, l) > (1u << 25)) {
    throw std::invalid_argument("arc-set enumeration would materialize too many subsets");
  }
  std::vector<std::uint64_t> result;
  if (l > k || l > n - k) return result;

  std::vector<std::vector<int>> arc_lens, gap_lens;
  std::vector<int> scratch;
  compositions(k, l, scratch, arc_lens);
  compositions(n - k, l, scratch, gap_lens);

  auto first_arc_start = [n](std::uint64_t mask) {
    for (int v = 0; v < n; ++v) {
      const int prev = (v + n - 1) % n;
      if (((mask >> v) & 1) && !((mask >> prev) & 1)) return v;
    }
    return n;  // unreachable for proper subsets
  };

  for (int start = 0; start < n; ++start) {
    for (const auto& arcs : arc_lens) {
      for (const auto& gaps : gap_lens) {
        std::uint64_t mask = 0;
        int pos = start;
        for (int a = 0; a < l; ++a) {
          for (int t = 0; t < arcs[a]; ++t) {
            mask |= 1ULL << (pos % n);
            ++pos;
          }
          pos += gaps[a];
        }
        // Each subset arises once per arc serving as "first"; keep the
        // canonical representative to deduplicate.
        if (first_arc_start(mask) == start) result.push_back(mask);
      }
    }
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

double union_bound_pk(int n, int k, double gamma, double d) {
  if (n < 3) throw std::invalid_argument("union bound requires n >= 3");
  if (k < 1 || k > n / 2) throw std::invalid_argument("union bound requires 1 <= k <= n/2");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("union bound requires gamma in (0,1)");
  }
  if (!(d >= 1.0)) throw std::invalid_argument("union bound requires d >= 1");

  // Small sets keep boundary >= 2 from the cycle alone, which already meets
  // the min(gamma*k, 2d) target when gamma*k <= 2.
  if (static_cast<double>(k) < 2.0 / gamma) return 0.0;

  const double target = std::min(gamma * k, 2.0 * d);  // case split on which term binds
  const double mu = target / (2.0 * gamma);
  const int lmax = static_cast<int>(std::floor(target / 2.0 + 1e-12));
  const double log_n = std::log(static_cast<double>(n));

  double total = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    const double threshold = target - 2.0 * l;
    if (threshold < 0.0) break;
    const double r = threshold / mu;
    double log_prob = 0.0;  // trivial bound when r >= 1
    if (r < 1.0) log_prob = -mu * poisson_h(r);
    total += std::exp(2.0 * l * log_n + log_prob);
  }
  return total;
}

}  // namespace rewire
