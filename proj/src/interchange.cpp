#include "rewire/interchange.hpp"

#include <cmath>
#include <stdexcept>

namespace rewire {

InterchangeKernel::InterchangeKernel(const PhaseGraph& graph) : graph_(graph) {
  owner_.resize(graph_.n);
}

void InterchangeKernel::fire_prepared(std::vector<int>& moving, int edge_index,
                                      RewiringStats& stats, const SimOptions& options) const {
  const auto [i, j] = graph_.edges[edge_index];
  ++stats.total_swaps;
  if (i == j) return;  // a self-loop fires but modifies nothing

  const int a = owner_[i];
  const int b = owner_[j];
  moving[a] = j;
  moving[b] = i;
  owner_[i] = b;
  owner_[j] = a;

  auto& mods = stats.per_node_modifications;
  ++mods[a];
  ++mods[b];
  if (options.counting == CountingMode::OwnerAndEndpoint) {
    ++mods[i];
    ++mods[j];
  }
}

void InterchangeKernel::fire(std::vector<int>& moving, int edge_index, RewiringStats& stats,
                             const SimOptions& options) const {
  if (static_cast<int>(moving.size()) != graph_.n) {
    throw std::invalid_argument("moving permutation has wrong length");
  }
  if (edge_index < 0 || edge_index >= static_cast<int>(graph_.edges.size())) {
    throw std::invalid_argument("edge index out of range");
  }
  if (stats.per_node_modifications.size() != static_cast<std::size_t>(graph_.n)) {
    stats.per_node_modifications.assign(graph_.n, 0);
  }
  for (int v = 0; v < graph_.n; ++v) owner_[moving[v]] = v;
  fire_prepared(moving, edge_index, stats, options);
}

void InterchangeKernel::run(std::vector<int>& moving, double t, Rng& rng, RewiringStats& stats,
                            const SimOptions& options) const {
  if (static_cast<int>(moving.size()) != graph_.n) {
    throw std::invalid_argument("moving permutation has wrong length");
  }
  if (t < 0) throw std::invalid_argument("phase length must be nonnegative");
  if (stats.per_node_modifications.size() != static_cast<std::size_t>(graph_.n)) {
    stats.per_node_modifications.assign(graph_.n, 0);
  }
  for (int v = 0; v < graph_.n; ++v) owner_[moving[v]] = v;

  const std::size_t m = graph_.edges.size();
  const double total_rate = static_cast<double>(m);
  double clock = rng.exponential(total_rate);
  while (clock <= t) {
    fire_prepared(moving, static_cast<int>(rng.uniform_int(m)), stats, options);
    clock += rng.exponential(total_rate);
  }
  stats.elapsed_time += t;
}

PhaseResult simulate_phase(const PointerConfig& config, Color moving, double t, Rng& rng,
                           const SimOptions& options) {
  config.validate();
  PhaseResult result{config, {}};
  InterchangeKernel kernel(build_phase_graph(config, other_color(moving)));
  kernel.run(result.config.perm(moving), t, rng, result.stats, options);
  return result;
}

double SimParams::resolved_phase_length() const {
  return a_exponent ? std::pow(std::log(static_cast<double>(n)), *a_exponent) : phase_length;
}

void SimParams::validate() const {
  if (n < 3) throw std::invalid_argument("simulation requires n >= 3");
  if (num_phases < 1) throw std::invalid_argument("num_phases must be at least 1");
  if (resolved_phase_length() <= 0) throw std::invalid_argument("phase length must be positive");
}

ProtocolResult run_protocol(const SimParams& params, Rng& rng,
                            const std::optional<PointerConfig>& initial,
                            const SimOptions& options, const PhaseObserver& on_phase_end) {
  params.validate();
  ProtocolResult result;
  result.initial_config = initial ? *initial : make_random_config(params.n, rng);
  result.initial_config.validate();
  if (result.initial_config.n != params.n) {
    throw std::invalid_argument("initial config size does not match params");
  }

  const double t = params.resolved_phase_length();
  PointerConfig current = result.initial_config;
  result.total_modifications.assign(params.n, 0);
  for (int f = 0; f < params.num_phases; ++f) {
    const Color moving = (f % 2 == 0) ? Color::Blue : Color::Red;
    PhaseResult phase = simulate_phase(current, moving, t, rng, options);
    phase.stats.phase_index = f;
    for (int v = 0; v < params.n; ++v) {
      result.total_modifications[v] += phase.stats.per_node_modifications[v];
    }
    current = phase.config;
    result.phases.push_back({moving, std::move(phase.stats)});
    if (on_phase_end) on_phase_end(f, current);
  }
  result.final_config = std::move(current);
  return result;
}

double poisson_h(double x) {
  if (x < 0) throw std::invalid_argument("h(x) requires x >= 0");
  if (x == 0.0) return 1.0;  // limit of x ln x - x + 1
  return x * std::log(x) - x + 1.0;
}

double poisson_rewiring_tail(double tau, double threshold_factor) {
  if (tau < 0) throw std::invalid_argument("tau must be nonnegative");
  if (threshold_factor < 1.0) {
    throw std::invalid_argument("threshold factor below 1 gives no upper tail bound");
  }
  return std::exp(-8.0 * tau * poisson_h(threshold_factor));
}

}  // namespace rewire
