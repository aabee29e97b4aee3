#pragma once

#include <cstdint>
#include <vector>

#include "rewire/phase_graph.hpp"

namespace rewire {

// Canonical-path system between all ordered node pairs, sampled from
// independent fixed-length random walks.  For each pair (i, j) the system
// keeps the first sampled walk from i that ends at j after exactly
// `path_length` steps; raw walks only contribute to the visit counters.
struct PathSystem {
  int n = 0;
  int path_length = 0;  // steps per walk
  bool lazy = false;
  std::uint64_t walks_per_source = 0;

  // selected paths, indexed i*n + j for ordered pairs i != j (diagonal kept
  // empty).  nodes has path_length+1 entries; steps has path_length entries,
  // each an edge index or -1 for a lazy hold.
  struct Path {
    std::vector<int> nodes;
    std::vector<int> steps;
  };
  std::vector<Path> selected;

  std::vector<std::uint64_t> node_visits;      // over ALL sampled walks
  std::vector<std::uint64_t> edge_congestion;  // selected paths only

  double coverage = 0.0;            // joined fraction of the n(n-1) pairs
  std::uint64_t congestion = 0;     // K = max entry of edge_congestion
  std::uint64_t max_node_visits = 0;

  const Path& path(int from, int to) const { return selected[from * n + to]; }
};

struct PathOptions {
  double gamma = 0.0;                  // required, in (0, 1]
  std::uint64_t walks_per_source = 0;  // 0 = ceil(5 n ln n)
  int walk_degree = 0;                 // d in the length formula; 0 = max degree
  bool lazy = false;                   // hold with probability 1/2 each step
  bool parallel = true;
};

// ceil(2 ln(n) d^2 / gamma^2), the walk length used by the path system.
int path_length_bound(int n, int d, double gamma);

// Samples walks_per_source walks of length path_length_bound(...) from every
// source and assembles the path system.  Walk steps are uniform over the
// incident edge slots, so parallel edges weight the step and a self-loop is
// taken with probability 2/degree.  Sources use independent RNG substreams
// derived from `seed`; results do not depend on thread count.
PathSystem build_path_system(const PhaseGraph& graph, const PathOptions& options,
                             std::uint64_t seed);

// Mixing-time budget 8 ln(n) * path_length * congestion / n.
double mixing_budget(int n, int path_length, std::uint64_t congestion);

// Exact endpoint-hit analysis of the length-`path_length` walk on a regular
// multigraph: builds the one-step transition matrix, takes its power, and
// compares every entry against the 1/(2n) floor.  The floor is only promised
// when lambda_star_abs^path_length <= 1/(2n) (premise), where lambda_star_abs
// is the second-largest |eigenvalue| of the transition matrix; instances
// failing the premise are diagnosable via the reported spectrum data.
struct HitProbReport {
  int n = 0;
  int path_length = 0;
  bool lazy = false;
  double lambda_star_abs = 0.0;  // max(|mu_2|, |mu_min|) of the step matrix
  double walk_gap = 0.0;         // 1 - mu_2
  bool premise_holds = false;    // lambda_star_abs^path_length <= 1/(2n)
  double min_hit = 0.0;          // min over ordered pairs of P^path_length
  bool floor_holds = false;      // min_hit >= 1/(2n)
};

HitProbReport hit_probability_check(const PhaseGraph& graph, int path_length, bool lazy);

// One-step walk transition matrix as a dense row-major vector (requires a
// regular graph so the matrix is symmetric).  Exposed for the symmetry and
// power identities in the tests.
std::vector<double> walk_transition_matrix(const PhaseGraph& graph, bool lazy);

}  // namespace rewire
