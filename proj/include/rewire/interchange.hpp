#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"

namespace rewire {

// Which per-node modification events are tallied into M_n.
//   OwnerAndEndpoint: a swap on edge (i,j) moving pointers owned by a and b
//     increments M_a, M_b, M_i, M_j (coincident roles accumulate).  The
//     increment rate per node is then exactly 8: the pointer issued from n
//     sits on a degree-4 node, and node n itself has degree 4.
//   OwnerOnly: only M_a, M_b.
enum class CountingMode { OwnerAndEndpoint, OwnerOnly };

struct RewiringStats {
  std::vector<std::uint32_t> per_node_modifications;
  std::uint64_t total_swaps = 0;  // fired events, self-loop no-ops included
  int phase_index = 0;
  double elapsed_time = 0.0;
};

struct SimOptions {
  CountingMode counting = CountingMode::OwnerAndEndpoint;
};

// Continuous-time interchange engine for one phase: every edge of the fixed
// phase graph carries an independent rate-1 exponential timer; when edge
// (i,j) fires, the moving-color pointers ending at i and j swap targets.
// Realized as the equivalent jump-chain form: exponential(#edges) holding
// times and a uniformly chosen edge per event.
class InterchangeKernel {
 public:
  explicit InterchangeKernel(const PhaseGraph& graph);

  // Runs the process on `moving` (a permutation of {0..n-1}) for duration t,
  // accumulating into stats.  Timers never carry across calls.
  void run(std::vector<int>& moving, double t, Rng& rng, RewiringStats& stats,
           const SimOptions& options = {}) const;

  // Applies the single event "edge index e fires" deterministically.
  void fire(std::vector<int>& moving, int edge_index, RewiringStats& stats,
            const SimOptions& options = {}) const;

  const PhaseGraph& graph() const { return graph_; }

 private:
  PhaseGraph graph_;
  mutable std::vector<int> owner_;  // scratch: owner_[x] = n with moving[n] == x

  void fire_prepared(std::vector<int>& moving, int edge_index, RewiringStats& stats,
                     const SimOptions& options) const;
};

struct PhaseResult {
  PointerConfig config;
  RewiringStats stats;
};

// One phase: pointers of `moving` evolve on the graph built from the other
// color; the fixed color is untouched.
PhaseResult simulate_phase(const PointerConfig& config, Color moving, double t, Rng& rng,
                           const SimOptions& options = {});

struct SimParams {
  int n = 0;
  double phase_length = 0.0;            // ignored if a_exponent is set
  std::optional<double> a_exponent;     // phase_length = pow(ln n, a)
  int num_phases = 1;

  double resolved_phase_length() const;
  void validate() const;
};

struct PhaseRecord {
  Color moved;
  RewiringStats stats;
};

struct ProtocolResult {
  PointerConfig initial_config;
  PointerConfig final_config;
  std::vector<PhaseRecord> phases;
  // Per-node totals across all phases (counting mode from options).
  std::vector<std::uint64_t> total_modifications;
};

// Called after each phase with the phase index and the configuration it
// produced; lets callers snapshot profiles or other state without the
// protocol runner retaining every intermediate config.
using PhaseObserver = std::function<void(int, const PointerConfig&)>;

// Alternating phases starting with blue.  If `initial` is empty, a random
// configuration is drawn from rng first.
ProtocolResult run_protocol(const SimParams& params, Rng& rng,
                            const std::optional<PointerConfig>& initial = std::nullopt,
                            const SimOptions& options = {},
                            const PhaseObserver& on_phase_end = {});

// h(x) = x ln x - x + 1 (Poisson/Chernoff exponent), h(0) = 1.
double poisson_h(double x);

// Tail bound for the per-node modification count over accumulated time tau:
// P(M_n >= c * 8 tau) <= exp(-8 tau h(c)) for c >= 1.
double poisson_rewiring_tail(double tau, double threshold_factor);

}  // namespace rewire
