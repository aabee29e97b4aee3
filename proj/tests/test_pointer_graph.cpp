#include <doctest.h>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"

using namespace rewire;

namespace {

// Independent boundary count straight from the definition: cycle edges cross
// iff the endpoints' membership differs, pointer edges likewise.
int boundary_by_definition(const PointerConfig& config, Color fixed, std::uint64_t mask) {
  const int n = config.n;
  int total = 0;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (((mask >> i) & 1) != ((mask >> j) & 1)) ++total;
  }
  for (int i = 0; i < n; ++i) {
    const int p = config.perm(fixed)[i];
    if (((mask >> i) & 1) != ((mask >> p) & 1)) ++total;
  }
  return total;
}

}  // namespace

TEST_CASE("canonical configuration shape") {
  const PointerConfig config = make_canonical_config(6);
  CHECK(config.n == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(config.blue[i] == i);
    CHECK(config.red[i] == (i + 1) % 6);
  }
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("configuration validation rejects non-bijections") {
  PointerConfig config = make_canonical_config(5);
  config.red[0] = config.red[1];
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("configuration text round trip") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const PointerConfig config = make_random_config(9, rng);
    const PointerConfig parsed = config_from_text(config_to_text(config));
    CHECK(parsed.n == config.n);
    CHECK(parsed.red == config.red);
    CHECK(parsed.blue == config.blue);
  }
}

TEST_CASE("phase graph is 4-regular with multiplicity") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointerConfig config = make_random_config(10, rng);
    for (Color fixed : {Color::Red, Color::Blue}) {
      const PhaseGraph graph = build_phase_graph(config, fixed);
      CHECK(graph.n == 10);
      CHECK(graph.edges.size() == 20);
      CHECK(graph.cycle_edge_count == 10);
      CHECK(graph.is_phase_graph());
      CHECK(graph.max_degree() == 4);
      for (int v = 0; v < graph.n; ++v) CHECK(graph.degree(v) == 4);
      CHECK(graph.connected());  // the cycle alone connects everything
    }
  }
}

TEST_CASE("identity pointers appear as self-loops with degree weight two") {
  const PointerConfig config = make_canonical_config(5);
  const PhaseGraph graph = build_phase_graph(config, Color::Blue);
  int loops = 0;
  for (auto [u, v] : graph.edges) loops += (u == v);
  CHECK(loops == 5);
  for (int v = 0; v < graph.n; ++v) CHECK(graph.degree(v) == 4);
}

TEST_CASE("parallel pointer edges keep their multiplicity") {
  // Red of the canonical configuration duplicates every cycle edge.
  const PointerConfig config = make_canonical_config(8);
  const PhaseGraph graph = build_phase_graph(config, Color::Red);
  const std::vector<int> arc{0, 1, 2};
  CHECK(edge_boundary(graph, arc) == 4);  // two cut points, each doubled
}

TEST_CASE("arc counting") {
  CHECK(count_arcs(8, {0}) == 1);
  CHECK(count_arcs(8, {0, 1, 2}) == 1);
  CHECK(count_arcs(8, {0, 2, 4}) == 3);
  CHECK(count_arcs(8, {7, 0, 1}) == 1);  // wraps around
  CHECK(count_arcs(6, {0, 1, 3, 4}) == 2);
  CHECK(count_arcs_mask(8, members_to_mask(8, {7, 0, 3})) == 2);
}

TEST_CASE("mask round trips") {
  const std::vector<int> members{0, 3, 5};
  const std::uint64_t mask = members_to_mask(8, members);
  CHECK(mask == 0b101001);
  CHECK(mask_to_members(8, mask) == members);
}

TEST_CASE("cut identity: total boundary = pointer boundary + 2 * arcs") {
  Rng rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const PointerConfig config =
        trial == 0 ? make_canonical_config(10) : make_random_config(10, rng);
    for (Color fixed : {Color::Red, Color::Blue}) {
      const PhaseGraph graph = build_phase_graph(config, fixed);
      for (std::uint64_t mask = 1; mask + 1 < (1ULL << config.n); ++mask) {
        const Cut cut = cut_info(config, fixed, mask_to_members(config.n, mask));
        CHECK(cut.boundary_total == cut.boundary_pointer + 2 * cut.arcs);
        CHECK(cut.boundary_total == boundary_by_definition(config, fixed, mask));
        CHECK(cut.boundary_total == edge_boundary_mask(graph, mask));
      }
    }
  }
}

TEST_CASE("outgoing pointer cut never exceeds the undirected pointer boundary") {
  Rng rng(29);
  const PointerConfig config = make_random_config(8, rng);
  for (Color color : {Color::Red, Color::Blue}) {
    for (std::uint64_t mask = 1; mask + 1 < (1ULL << config.n); ++mask) {
      const std::vector<int> members = mask_to_members(config.n, mask);
      const Cut cut = cut_info(config, color, members);
      const int outgoing = outgoing_pointer_cut(config, color, members);
      CHECK(outgoing <= cut.boundary_pointer);
      CHECK(outgoing >= 0);
    }
  }
}

TEST_CASE("boundary rejects improper subsets") {
  const PhaseGraph graph = build_phase_graph(make_canonical_config(6), Color::Red);
  CHECK_THROWS_AS(edge_boundary(graph, {}), std::invalid_argument);
  CHECK_THROWS_AS(edge_boundary(graph, {0, 1, 2, 3, 4, 5}), std::invalid_argument);
}
