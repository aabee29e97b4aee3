#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rewire/interchange.hpp"
#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"

using namespace rewire;

TEST_CASE("single firing swaps the two pointers ending at the edge") {
  const PointerConfig config = make_canonical_config(4);
  InterchangeKernel kernel(build_phase_graph(config, Color::Red));
  std::vector<int> moving = config.blue;  // identity
  RewiringStats stats;
  stats.per_node_modifications.assign(4, 0);
  kernel.fire(moving, 0, stats);  // cycle edge (0, 1)

  CHECK(moving == std::vector<int>{1, 0, 2, 3});
  CHECK(stats.total_swaps == 1);
  // Nodes 0 and 1 are both owner and endpoint of the swap.
  CHECK(stats.per_node_modifications == std::vector<std::uint32_t>{2, 2, 0, 0});
}

TEST_CASE("owner-only counting credits each swap to the two owners") {
  const PointerConfig config = make_canonical_config(4);
  InterchangeKernel kernel(build_phase_graph(config, Color::Red));
  std::vector<int> moving{2, 3, 0, 1};
  RewiringStats stats;
  stats.per_node_modifications.assign(4, 0);
  SimOptions options;
  options.counting = CountingMode::OwnerOnly;
  kernel.fire(moving, 0, stats, options);  // edge (0, 1): owners are 2 and 3

  CHECK(moving == std::vector<int>{2, 3, 1, 0});
  CHECK(stats.per_node_modifications == std::vector<std::uint32_t>{0, 0, 1, 1});
}

TEST_CASE("self-loop firings count as events but modify nothing") {
  // Fixed blue identity pointers give one self-loop per node.
  const PointerConfig config = make_canonical_config(4);
  InterchangeKernel kernel(build_phase_graph(config, Color::Blue));
  std::vector<int> moving = config.red;
  const std::vector<int> before = moving;
  RewiringStats stats;
  stats.per_node_modifications.assign(4, 0);
  kernel.fire(moving, 4 + 2, stats);  // pointer edge of node 2: (2, 2)

  CHECK(moving == before);
  CHECK(stats.total_swaps == 1);
  for (std::uint32_t m : stats.per_node_modifications) CHECK(m == 0);
}

TEST_CASE("a phase preserves the moving bijection") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const PointerConfig config = make_random_config(12, rng);
    const PhaseResult result = simulate_phase(config, Color::Blue, 3.0, rng);
    CHECK_NOTHROW(result.config.validate());
    CHECK(result.config.red == config.red);  // fixed color untouched
  }
}

TEST_CASE("event count matches the total firing rate") {
  // Edges fire independently at rate 1, so a length-T phase on 2n edges
  // fires Poisson(2n T) times in total.
  const int n = 8;
  const double t = 5.0;
  const std::uint64_t replicas = 400;
  const PointerConfig config = make_canonical_config(n);
  std::uint64_t events = 0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    Rng rng(4242, r);
    events += simulate_phase(config, Color::Blue, t, rng).stats.total_swaps;
  }
  const double mean = static_cast<double>(events) / replicas;
  const double expectation = 2.0 * n * t;  // 80
  const double sigma = std::sqrt(expectation / replicas);
  CHECK(std::abs(mean - expectation) <= 4.0 * sigma);
}

TEST_CASE("owner+endpoint counting doubles the owner-only total") {
  // Same seed, same trajectory; only the accounting differs, and with no
  // self-loops every swap adds 2 owner and 2 endpoint increments.
  const PointerConfig config = make_canonical_config(10);
  SimOptions both;
  SimOptions owner;
  owner.counting = CountingMode::OwnerOnly;
  Rng rng_a(77);
  Rng rng_b(77);
  const PhaseResult a = simulate_phase(config, Color::Blue, 4.0, rng_a, both);
  const PhaseResult b = simulate_phase(config, Color::Blue, 4.0, rng_b, owner);
  CHECK(a.config.blue == b.config.blue);
  const auto total = [](const PhaseResult& r) {
    return std::accumulate(r.stats.per_node_modifications.begin(),
                           r.stats.per_node_modifications.end(), std::uint64_t{0});
  };
  CHECK(total(a) == 2 * total(b));
}

TEST_CASE("identical seeds reproduce a phase exactly") {
  const PointerConfig config = make_canonical_config(16);
  Rng rng_a(9001, 3);
  Rng rng_b(9001, 3);
  const PhaseResult a = simulate_phase(config, Color::Red, 2.5, rng_a);
  const PhaseResult b = simulate_phase(config, Color::Red, 2.5, rng_b);
  CHECK(a.config.red == b.config.red);
  CHECK(a.stats.total_swaps == b.stats.total_swaps);
  CHECK(a.stats.per_node_modifications == b.stats.per_node_modifications);

  Rng rng_c(9001, 4);  // different stream
  const PhaseResult c = simulate_phase(config, Color::Red, 2.5, rng_c);
  CHECK(a.config.red != c.config.red);
}

TEST_CASE("protocol alternates colors and reports per-phase stats") {
  SimParams params;
  params.n = 10;
  params.num_phases = 4;
  params.phase_length = 1.5;
  Rng rng(31337);
  int observed = 0;
  const ProtocolResult result =
      run_protocol(params, rng, std::nullopt, {}, [&](int phase, const PointerConfig& config) {
        CHECK(phase == observed);
        CHECK_NOTHROW(config.validate());
        ++observed;
      });
  CHECK(observed == 4);
  CHECK(result.phases.size() == 4);
  CHECK(result.phases[0].moved == Color::Blue);
  CHECK(result.phases[1].moved == Color::Red);
  CHECK(result.phases[2].moved == Color::Blue);
  CHECK(result.phases[3].moved == Color::Red);
  CHECK(result.total_modifications.size() == 10);
  std::uint64_t from_phases = 0;
  std::uint64_t from_totals = 0;
  for (const auto& phase : result.phases) {
    for (std::uint32_t m : phase.stats.per_node_modifications) from_phases += m;
  }
  for (std::uint64_t m : result.total_modifications) from_totals += m;
  CHECK(from_phases == from_totals);
  CHECK_NOTHROW(result.final_config.validate());
}

TEST_CASE("phase length derived from the exponent rule") {
  SimParams params;
  params.n = 20;
  params.a_exponent = 2.0;
  CHECK(params.resolved_phase_length() == doctest::Approx(std::pow(std::log(20.0), 2.0)));
  params.a_exponent.reset();
  params.phase_length = 7.0;
  CHECK(params.resolved_phase_length() == 7.0);
}

TEST_CASE("parameter validation") {
  SimParams params;
  params.n = 2;
  params.phase_length = 1.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.n = 8;
  params.phase_length = -1.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("poisson exponent and rewiring tail") {
  CHECK(poisson_h(1.0) == doctest::Approx(0.0));
  CHECK(poisson_h(0.0) == doctest::Approx(1.0));
  CHECK(poisson_h(2.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0));
  const double tau = 3.0;
  CHECK(poisson_rewiring_tail(tau, 2.0) ==
        doctest::Approx(std::exp(-8.0 * tau * (2.0 * std::log(2.0) - 1.0))));
}
