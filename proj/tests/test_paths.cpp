#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rewire/paths.hpp"
#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"

using namespace rewire;

namespace {

std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  }
  return c;
}

}  // namespace

TEST_CASE("walk length formula") {
  // ceil(2 ln(16) * 16 / 0.25) = ceil(354.89...) = 355
  CHECK(path_length_bound(16, 4, 0.5) == 355);
  CHECK(path_length_bound(8, 2, 1.0) == 17);  // ceil(16.63...)
  CHECK_THROWS_AS(path_length_bound(8, 2, 0.0), std::invalid_argument);
}

TEST_CASE("path system structure on a doubled cycle") {
  const PhaseGraph graph = build_phase_graph(make_canonical_config(8), Color::Red);
  PathOptions options;
  options.gamma = 1.0;
  const PathSystem system = build_path_system(graph, options, 2024);

  CHECK(system.n == 8);
  CHECK(system.path_length == path_length_bound(8, 4, 1.0));
  CHECK(system.walks_per_source ==
        static_cast<std::uint64_t>(std::ceil(5.0 * 8.0 * std::log(8.0))));

  // Every sampled walk contributes path_length+1 node visits.
  const std::uint64_t visits =
      std::accumulate(system.node_visits.begin(), system.node_visits.end(), std::uint64_t{0});
  CHECK(visits == 8ULL * system.walks_per_source * (system.path_length + 1));
  CHECK(system.max_node_visits ==
        *std::max_element(system.node_visits.begin(), system.node_visits.end()));

  // Selected paths really are walks along graph edges with the right length
  // and endpoints.
  int joined = 0;
  std::uint64_t steps_total = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const auto& path = system.path(i, j);
      if (path.nodes.empty()) continue;
      ++joined;
      CHECK(i != j);
      REQUIRE(path.nodes.size() == static_cast<std::size_t>(system.path_length) + 1);
      REQUIRE(path.steps.size() == static_cast<std::size_t>(system.path_length));
      CHECK(path.nodes.front() == i);
      CHECK(path.nodes.back() == j);
      for (int t = 0; t < system.path_length; ++t) {
        const int e = path.steps[t];
        if (e < 0) {
          CHECK(path.nodes[t + 1] == path.nodes[t]);  // lazy hold
        } else {
          ++steps_total;
          const auto [u, v] = graph.edges[e];
          const bool forward = u == path.nodes[t] && v == path.nodes[t + 1];
          const bool backward = v == path.nodes[t] && u == path.nodes[t + 1];
          CHECK((forward || backward));
        }
      }
    }
  }
  CHECK(system.coverage == doctest::Approx(joined / 56.0));
  const std::uint64_t congestion_total = std::accumulate(
      system.edge_congestion.begin(), system.edge_congestion.end(), std::uint64_t{0});
  CHECK(congestion_total == steps_total);
  CHECK(system.congestion ==
        *std::max_element(system.edge_congestion.begin(), system.edge_congestion.end()));
}

TEST_CASE("path sampling is independent of threading and reproducible") {
  Rng rng(61);
  const PhaseGraph graph = build_phase_graph(make_random_config(10, rng), Color::Blue);
  PathOptions serial;
  serial.gamma = 0.8;
  serial.walks_per_source = 40;
  serial.parallel = false;
  PathOptions parallel = serial;
  parallel.parallel = true;

  const PathSystem a = build_path_system(graph, serial, 99);
  const PathSystem b = build_path_system(graph, parallel, 99);
  CHECK(a.node_visits == b.node_visits);
  CHECK(a.edge_congestion == b.edge_congestion);
  CHECK(a.coverage == b.coverage);

  const PathSystem c = build_path_system(graph, parallel, 100);
  CHECK(a.node_visits != c.node_visits);
}

TEST_CASE("walk transition matrix is symmetric and stochastic") {
  Rng rng(67);
  const PhaseGraph graph = build_phase_graph(make_random_config(9, rng), Color::Red);
  for (bool lazy : {false, true}) {
    const std::vector<double> p = walk_transition_matrix(graph, lazy);
    for (int i = 0; i < 9; ++i) {
      double row = 0.0;
      for (int j = 0; j < 9; ++j) {
        row += p[i * 9 + j];
        CHECK(p[i * 9 + j] == doctest::Approx(p[j * 9 + i]).epsilon(1e-15));
        CHECK(p[i * 9 + j] >= 0.0);
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
      if (lazy) CHECK(p[i * 9 + i] >= 0.5);
    }
  }
}

TEST_CASE("self-loops keep the walker in place with weight 2/degree") {
  // Blue identity pointers: each node has cycle edges plus its own loop.
  const PhaseGraph graph = build_phase_graph(make_canonical_config(6), Color::Blue);
  const std::vector<double> p = walk_transition_matrix(graph, false);
  for (int i = 0; i < 6; ++i) CHECK(p[i * 6 + i] == doctest::Approx(0.5));
}

TEST_CASE("hit probabilities agree with a naive matrix power") {
  Rng rng(71);
  const PhaseGraph graph = build_phase_graph(make_random_config(6, rng), Color::Blue);
  const int len = 7;
  const HitProbReport report = hit_probability_check(graph, len, false);

  std::vector<double> p = walk_transition_matrix(graph, false);
  std::vector<double> power(36, 0.0);
  for (int i = 0; i < 6; ++i) power[i * 6 + i] = 1.0;
  for (int step = 0; step < len; ++step) power = matmul(power, p, 6);
  const double naive_min = *std::min_element(power.begin(), power.end());

  CHECK(report.n == 6);
  CHECK(report.path_length == len);
  CHECK(report.min_hit == doctest::Approx(naive_min).epsilon(1e-10));
  CHECK(report.floor_holds == (report.min_hit >= 1.0 / 12.0));
  CHECK(report.lambda_star_abs <= 1.0 + 1e-12);
  CHECK(report.walk_gap >= -1e-12);
}

TEST_CASE("long lazy walks meet the hit floor with the premise") {
  const PhaseGraph graph = build_phase_graph(make_canonical_config(8), Color::Red);
  const int len = path_length_bound(8, 4, 1.0);
  const HitProbReport report = hit_probability_check(graph, len, true);
  CHECK(report.premise_holds);
  CHECK(report.floor_holds);
  CHECK(report.min_hit >= 1.0 / 16.0);
}

TEST_CASE("mixing budget formula") {
  CHECK(mixing_budget(16, 355, 4801) ==
        doctest::Approx(8.0 * std::log(16.0) * 355.0 * 4801.0 / 16.0));
}
