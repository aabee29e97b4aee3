#include "rewire/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rewire/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rewire {

int path_length_bound(int n, int d, double gamma) {
  if (n < 2 || d < 1) throw std::invalid_argument("path length needs n >= 2, d >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("gamma must be in (0,1]");
  const double raw = 2.0 * std::log(static_cast<double>(n)) * d * d / (gamma * gamma);
  return static_cast<int>(std::ceil(raw - 1e-12));
}

namespace {

struct SourceResult {
  std::vector<PathSystem::Path> selected;  // indexed by destination
  std::vector<std::uint64_t> visits;
};

SourceResult sample_source(const PhaseGraph& graph, int source, int length,
                           std::uint64_t walks, bool lazy, std::uint64_t seed) {
  const int n = graph.n;
  SourceResult out;
  out.selected.resize(n);
  out.visits.assign(n, 0);

  Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(source)));
  std::vector<int> nodes(length + 1);
  std::vector<int> steps(length);
  std::vector<char> filled(n, 0);

  for (std::uint64_t w = 0; w < walks; ++w) {
    int at = source;
    nodes[0] = at;
    ++out.visits[at];
    for (int t = 0; t < length; ++t) {
      if (lazy && rng.uniform() < 0.5) {
        steps[t] = -1;
      } else {
        const auto& slots = graph.incident[at];
        const auto& slot = slots[rng.uniform_int(slots.size())];
        steps[t] = slot.edge;
        at = slot.other;
      }
      nodes[t + 1] = at;
      ++out.visits[at];
    }
    if (at != source && !filled[at]) {
      filled[at] = 1;
      out.selected[at] = {nodes, steps};
    }
  }
  return out;
}

}  // namespace

PathSystem build_path_system(const PhaseGraph& graph, const PathOptions& options,
                             std::uint64_t seed) {
  // Disconnected graphs are allowed: unreachable pairs stay uncovered.
  const int n = graph.n;
  if (n < 2) throw std::invalid_argument("path system needs at least two nodes");
  const int d = options.walk_degree > 0 ? options.walk_degree : graph.max_degree();

  PathSystem system;
  system.n = n;
  system.path_length = path_length_bound(n, d, options.gamma);
  system.lazy = options.lazy;
  system.walks_per_source =
      options.walks_per_source > 0
          ? options.walks_per_source
          : static_cast<std::uint64_t>(std::ceil(5.0 * n * std::log(static_cast<double>(n))));
  system.selected.resize(static_cast<std::size_t>(n) * n);
  system.node_visits.assign(n, 0);
  system.edge_congestion.assign(graph.edges.size(), 0);

  std::vector<SourceResult> per_source(n);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (int i = 0; i < n; ++i) {
    per_source[i] = sample_source(graph, i, system.path_length, system.walks_per_source,
                                  system.lazy, seed);
  }

  std::uint64_t joined = 0;
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < n; ++v) system.node_visits[v] += per_source[i].visits[v];
    for (int j = 0; j < n; ++j) {
      auto& path = per_source[i].selected[j];
      if (path.nodes.empty()) continue;
      ++joined;
      for (int e : path.steps) {
        if (e >= 0) ++system.edge_congestion[e];
      }
      system.selected[static_cast<std::size_t>(i) * n + j] = std::move(path);
    }
  }
  system.coverage = static_cast<double>(joined) / (static_cast<double>(n) * (n - 1));
  system.congestion = system.edge_congestion.empty()
                          ? 0
                          : *std::max_element(system.edge_congestion.begin(),
                                              system.edge_congestion.end());
  system.max_node_visits =
      *std::max_element(system.node_visits.begin(), system.node_visits.end());
  return system;
}

double mixing_budget(int n, int path_length, std::uint64_t congestion) {
  if (n < 2 || path_length < 1) throw std::invalid_argument("invalid mixing budget inputs");
  return 8.0 * std::log(static_cast<double>(n)) * path_length *
         static_cast<double>(congestion) / n;
}

std::vector<double> walk_transition_matrix(const PhaseGraph& graph, bool lazy) {
  const int n = graph.n;
  const int d = graph.max_degree();
  for (int v = 0; v < n; ++v) {
    if (graph.degree(v) != d) {
      throw std::invalid_argument("walk transition matrix requires a regular graph");
    }
  }
  std::vector<double> P(static_cast<std::size_t>(n) * n, 0.0);
  for (int v = 0; v < n; ++v) {
    for (const auto& slot : graph.incident[v]) {
      P[static_cast<std::size_t>(v) * n + slot.other] += 1.0 / d;
    }
  }
  if (lazy) {
    for (auto& x : P) x *= 0.5;
    for (int v = 0; v < n; ++v) P[static_cast<std::size_t>(v) * n + v] += 0.5;
  }
  return P;
}

HitProbReport hit_probability_check(const PhaseGraph& graph, int path_length, bool lazy) {
  if (path_length < 1) throw std::invalid_argument("path length must be positive");
  const int n = graph.n;
  const std::vector<double> flat = walk_transition_matrix(graph, lazy);
  Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(flat.data(), n, n);  // symmetric

  HitProbReport report;
  report.n = n;
  report.path_length = path_length;
  report.lazy = lazy;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
  const auto& mu = solver.eigenvalues();  // ascending; mu(n-1) = 1
  report.walk_gap = 1.0 - mu(n - 2);
  report.lambda_star_abs = std::max(std::abs(mu(0)), std::abs(mu(n - 2)));

  const double floor = 1.0 / (2.0 * n);
  report.premise_holds =
      path_length * std::log(std::max(report.lambda_star_abs, 1e-300)) <= std::log(floor);

  // P^path_length by binary exponentiation.
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = P;
  for (int e = path_length; e > 0; e >>= 1) {
    if (e & 1) power = power * base;
    if (e > 1) base = base * base;
  }
  report.min_hit = power.minCoeff();
  report.floor_holds = report.min_hit >= floor;
  return report;
}

}  // namespace rewire
