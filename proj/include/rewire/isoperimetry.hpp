#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rewire/phase_graph.hpp"

namespace rewire {

// Exact isoperimetric data for subset sizes 1..kmax.  Two distinct profile
// conventions are carried side by side and never aliased:
//   phi_card[k]  = min_{0<|S|<=k} |E(S,S~)|          (a cardinality)
//   phi_ratio[k] = min_{0<|S|<=k} |E(S,S~)| / |S|    (a ratio)
// phi_size[k] is the per-size minimum (|S| == k exactly); both profiles are
// prefix aggregates of it.  Witnesses are bitmasks; ties break toward the
// numerically smallest mask, and across sizes toward the smallest size.
struct IsoProfile {
  int n = 0;
  int kmax = 0;
  std::vector<int> phi_size;                       // index 1..kmax
  std::vector<int> phi_card;                       // index 1..kmax
  std::vector<double> phi_ratio;                   // index 1..kmax
  std::vector<std::pair<int, int>> phi_ratio_frac; // exact (boundary, size)
  std::vector<std::uint64_t> witness_card;
  std::vector<std::uint64_t> witness_ratio;
};

struct ProfileOptions {
  int budget = 22;       // refuse enumeration beyond this many nodes
  bool parallel = true;  // strata kernel may fan out via OpenMP
};

// Exhaustive subset enumeration (all proper subsets of size <= kmax) with
// incremental boundary updates.  The subset space is partitioned on the top
// node bits into strata that can run in parallel; the merge is deterministic
// regardless of thread count.  Throws beyond the node budget instead of
// approximating.
IsoProfile profile_exact(const PhaseGraph& graph, int kmax, const ProfileOptions& options = {});

// Independent reference route: binary-reflected Gray code over all 2^n
// subsets, one toggle per step, no pruning and no strata.  Kept for testing
// the parallel kernel against.
IsoProfile profile_exact_serial(const PhaseGraph& graph, int kmax, int budget = 24);

// Lower-bound shape asserted by the bootstrap argument.
struct ExpansionHypothesis {
  double gamma = 0.0;  // in (0,1)
  double d = 0.0;      // cut saturation level, >= 1

  double floor_at(double k) const;  // min(gamma*k, d)
  void validate() const;
};

struct HypothesisReport {
  bool holds = true;
  int first_violation_k = 0;           // 0 when holds
  std::uint64_t witness_mask = 0;      // minimizer at the violating k
  double required = 0.0;               // min(gamma*k, d) there
  int observed = 0;                    // phi_card[k] there
};

// Verifies phi_card[k] >= min(gamma*k, d) for every k the profile covers.
// This prefix form implies the per-set statement |E(S,S~)| >= min(gamma|S|, d)
// for all |S| <= kmax (it is the stronger of the two readings).
HypothesisReport check_hypothesis(const IsoProfile& profile, const ExpansionHypothesis& hyp);

// Number of k-subsets of the n-cycle with exactly l maximal arcs:
//   n * C(k-1, l-1) * C(n-k-1, l-1) / l
// evaluated exactly in 128-bit arithmetic.  Returns 0 when infeasible.
std::uint64_t count_arc_sets(int n, int k, int l);

// Materializes those subsets as bitmasks (test scale; n <= 32).
std::vector<std::uint64_t> enumerate_arc_sets(int n, int k, int l);

// Union bound over arc counts for the probability that some size-<=k set
// ends a phase with boundary below min(gamma*k, 2d):
//   p_k <= sum_{l>=1} n^{2l} * P(|F| <= min(gamma*k, 2d) - 2l)
// with the inner probability from the Poisson lower-tail exponent at mean
// (2*gamma)^{-1} * min(gamma*k, 2d).  Returns 0 for k < 2/gamma, where the
// two cycle edges already meet the target.  The value is a bound and may
// exceed 1.
double union_bound_pk(int n, int k, double gamma, double d);

}  // namespace rewire
