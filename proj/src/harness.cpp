#include "rewire/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rewire {

// --------------------------------------------------------------------------
// ExperimentConfig
// --------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not `key = value`: " + stripped);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + " has empty key");
    }
    config.set(key, value);
  }
  return config;
}

std::string ExperimentConfig::emit() const {
  std::string out;
  for (const auto& [key, value] : entries) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

bool ExperimentConfig::contains(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return true;
  }
  return false;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  throw std::invalid_argument("config key not set: " + key);
}

std::string ExperimentConfig::get_or(const std::string& key, const std::string& fallback) const {
  return contains(key) ? get(key) : fallback;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!contains(key)) return fallback;
  const std::string& raw = get(key);
  std::size_t used = 0;
  const std::uint64_t value = std::stoull(raw, &used);
  if (used != raw.size()) throw std::invalid_argument("config key " + key + " is not an integer");
  return value;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  if (!contains(key)) return fallback;
  const std::string& raw = get(key);
  std::size_t used = 0;
  const double value = std::stod(raw, &used);
  if (used != raw.size()) throw std::invalid_argument("config key " + key + " is not a number");
  return value;
}

// --------------------------------------------------------------------------
// Stationarity
// --------------------------------------------------------------------------

UniformityReport uniformity_test(int n, double phase_length, std::uint64_t replicas,
                                 std::uint64_t seed, bool parallel) {
  if (n < 3 || n > 5) throw std::invalid_argument("uniformity test covers 3 <= n <= 5");
  if (!(phase_length > 0.0)) throw std::invalid_argument("phase length must be positive");
  const std::uint64_t cells = factorial(n);
  if (replicas < cells * 20) {
    throw std::invalid_argument("uniformity test needs at least 20 replicas per cell");
  }

  const PointerConfig base = make_canonical_config(n);
  std::vector<std::uint64_t> counts(cells, 0);
#pragma omp parallel if (parallel)
  {
    std::vector<std::uint64_t> local(cells, 0);
#pragma omp for schedule(static) nowait
    for (long long r = 0; r < static_cast<long long>(replicas); ++r) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      const PhaseResult result = simulate_phase(base, Color::Blue, phase_length, rng);
      ++local[permutation_index(result.config.blue)];
    }
#pragma omp critical
    for (std::uint64_t c = 0; c < cells; ++c) counts[c] += local[c];
  }

  UniformityReport report;
  report.n = n;
  report.phase_length = phase_length;
  report.replicas = replicas;
  report.chi = chi_square_uniform_test(counts);
  return report;
}

// --------------------------------------------------------------------------
// Occupancy duality
// --------------------------------------------------------------------------

namespace {

void check_members(int n, const std::vector<int>& members) {
  if (members.empty()) throw std::invalid_argument("member set must be nonempty");
  std::vector<char> seen(n, 0);
  for (int v : members) {
    if (v < 0 || v >= n) throw std::invalid_argument("member out of range");
    if (seen[v]) throw std::invalid_argument("member repeated");
    seen[v] = 1;
  }
}

}  // namespace

DualityReport exclusion_duality_test(const PointerConfig& config, const std::vector<int>& members,
                                     double phase_length, std::uint64_t replicas,
                                     std::uint64_t seed, bool parallel) {
  config.validate();
  const int n = config.n;
  check_members(n, members);
  if (phase_length < 0.0) throw std::invalid_argument("phase length must be nonnegative");
  if (replicas == 0) throw std::invalid_argument("need at least one replica");

  std::vector<std::uint64_t> counts(n, 0);
#pragma omp parallel if (parallel)
  {
    std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static) nowait
    for (long long r = 0; r < static_cast<long long>(replicas); ++r) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      const PhaseResult result = simulate_phase(config, Color::Blue, phase_length, rng);
      for (int m : members) ++local[result.config.blue[m]];
    }
#pragma omp critical
    for (int v = 0; v < n; ++v) counts[v] += local[v];
  }

  DualityReport report;
  report.n = n;
  report.phase_length = phase_length;
  report.replicas = replicas;
  report.members = members;
  report.empirical.resize(n);
  for (int v = 0; v < n; ++v) {
    report.empirical[v] = static_cast<double>(counts[v]) / static_cast<double>(replicas);
  }

  MassVector occupancy;  // indicator of the initial targets, not normalized
  occupancy.values.assign(n, 0.0);
  for (int m : members) occupancy.values[config.blue[m]] = 1.0;
  const PhaseGraph graph = build_phase_graph(config, Color::Red);
  report.analytic = heat_kernel(LaplacianView::from_graph(graph), occupancy, phase_length).values;

  for (int v = 0; v < n; ++v) {
    const double dev = std::abs(report.empirical[v] - report.analytic[v]);
    const double p = std::clamp(report.analytic[v], 0.0, 1.0);
    const double sigma = bernoulli_sigma_floor(p, replicas);
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    report.max_sigma_ratio = std::max(report.max_sigma_ratio, dev / sigma);
  }
  report.ok = report.max_sigma_ratio <= thresholds::kSigmaEnvelope;
  return report;
}

// --------------------------------------------------------------------------
// Mean cut
// --------------------------------------------------------------------------

MeanCutReport mean_cut_test(const PointerConfig& config, const std::vector<int>& members,
                            double phase_length, std::uint64_t replicas, double gamma, double d,
                            std::uint64_t seed, bool parallel) {
  config.validate();
  const int n = config.n;
  check_members(n, members);
  if (static_cast<int>(members.size()) >= n) {
    throw std::invalid_argument("member set must be proper");
  }
  if (phase_length < 0.0) throw std::invalid_argument("phase length must be nonnegative");
  if (replicas == 0) throw std::invalid_argument("need at least one replica");
  ExpansionHypothesis hyp{gamma, d};
  hyp.validate();

  const int k = static_cast<int>(members.size());
  const double floor = std::min(gamma * k, 2.0 * d) / (2.0 * gamma);
  const std::vector<double> r_values = {0.3, 0.5, 0.7};
  std::vector<double> tail_thresholds;
  for (double r : r_values) tail_thresholds.push_back(r * floor);

  std::uint64_t cut_sum = 0;
  std::uint64_t cut_sq_sum = 0;
  std::vector<std::uint64_t> tail_counts(r_values.size(), 0);
#pragma omp parallel if (parallel)
  {
    std::uint64_t local_sum = 0;
    std::uint64_t local_sq = 0;
    std::vector<std::uint64_t> local_tails(r_values.size(), 0);
#pragma omp for schedule(static) nowait
    for (long long r = 0; r < static_cast<long long>(replicas); ++r) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      const PhaseResult result = simulate_phase(config, Color::Blue, phase_length, rng);
      const int cut = outgoing_pointer_cut(result.config, Color::Blue, members);
      local_sum += static_cast<std::uint64_t>(cut);
      local_sq += static_cast<std::uint64_t>(cut) * static_cast<std::uint64_t>(cut);
      for (std::size_t j = 0; j < tail_thresholds.size(); ++j) {
        if (cut <= tail_thresholds[j]) ++local_tails[j];
      }
    }
#pragma omp critical
    {
      cut_sum += local_sum;
      cut_sq_sum += local_sq;
      for (std::size_t j = 0; j < tail_counts.size(); ++j) tail_counts[j] += local_tails[j];
    }
  }

  MeanCutReport report;
  report.n = n;
  report.set_size = k;
  report.phase_length = phase_length;
  report.replicas = replicas;
  report.mean_floor = floor;
  const double mean = static_cast<double>(cut_sum) / static_cast<double>(replicas);
  report.empirical_mean = mean;
  report.ratio = mean / floor;
  report.stationary_mean = static_cast<double>(k) * (n - k) / n;

  const double variance =
      std::max(0.0, static_cast<double>(cut_sq_sum) / static_cast<double>(replicas) - mean * mean);
  const double mean_se = std::sqrt(variance / static_cast<double>(replicas));
  bool all_ok = mean >= floor - thresholds::kSigmaEnvelope * mean_se;

  for (std::size_t j = 0; j < r_values.size(); ++j) {
    TailCheck tail;
    tail.r = r_values[j];
    tail.threshold = tail_thresholds[j];
    tail.frequency = static_cast<double>(tail_counts[j]) / static_cast<double>(replicas);
    tail.bound = chernoff_tail(floor, r_values[j]);
    const double sigma = bernoulli_sigma_floor(std::min(tail.bound, 0.5), replicas);
    tail.ok = tail.frequency <= tail.bound + thresholds::kSigmaEnvelope * sigma;
    all_ok = all_ok && tail.ok;
    report.tails.push_back(tail);
  }
  report.ok = all_ok;
  return report;
}

// --------------------------------------------------------------------------
// Bootstrap
// --------------------------------------------------------------------------

void BootstrapParams::validate() const {
  if (n < 3) throw std::invalid_argument("bootstrap needs n >= 3");
  if (!(gamma > 0.0) || gamma >= 1.0) throw std::invalid_argument("gamma must be in (0,1)");
  if (num_phases < 0) throw std::invalid_argument("phase count must be nonnegative");
  if (!a_exponent && !(phase_length > 0.0)) {
    throw std::invalid_argument("phase length must be positive");
  }
}

int BootstrapParams::resolved_phases() const {
  if (num_phases > 0) return num_phases;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
}

BootstrapReport run_bootstrap(const BootstrapParams& params) {
  params.validate();
  const int n = params.n;
  const int phases = params.resolved_phases();
  SimParams sim;
  sim.n = n;
  sim.phase_length = params.phase_length;
  sim.a_exponent = params.a_exponent;
  sim.num_phases = phases;
  const double T = sim.resolved_phase_length();

  Rng rng(params.seed);
  PointerConfig config = make_random_config(n, rng);

  BootstrapReport report;
  report.n = n;
  report.gamma = params.gamma;
  report.phase_length = T;
  report.exact_mode = n <= params.profile_budget;

  std::vector<std::uint64_t> totals(n, 0);
  ProfileOptions profile_options;
  profile_options.budget = params.profile_budget;

  for (int f = 0; f < phases; ++f) {
    const Color moving = (f % 2 == 0) ? Color::Blue : Color::Red;
    BootstrapPhaseRecord record;
    record.phase = f;
    record.moved = moving;
    record.d_f = std::ldexp(1.0, f + 1);  // 2^(f+1)

    if (report.exact_mode) {
      const PhaseGraph graph = build_phase_graph(config, other_color(moving));
      const IsoProfile profile = profile_exact(graph, n / 2, profile_options);
      const HypothesisReport hyp_report =
          check_hypothesis(profile, ExpansionHypothesis{params.gamma, record.d_f});
      record.hypothesis_checked = true;
      record.hypothesis_holds = hyp_report.holds;
      record.first_violation_k = hyp_report.first_violation_k;
    }

    const PhaseResult phase = simulate_phase(config, moving, T, rng);
    config = phase.config;
    std::uint64_t max_mod = 0;
    std::uint64_t sum_mod = 0;
    for (int v = 0; v < n; ++v) {
      const std::uint64_t m = phase.stats.per_node_modifications[v];
      totals[v] += m;
      max_mod = std::max(max_mod, m);
      sum_mod += m;
    }
    record.max_modifications = max_mod;
    record.mean_modifications = static_cast<double>(sum_mod) / n;
    report.phases.push_back(record);
  }

  if (report.exact_mode) {
    const Color next_moving = (phases % 2 == 0) ? Color::Blue : Color::Red;
    const PhaseGraph graph = build_phase_graph(config, other_color(next_moving));
    report.final_profile = profile_exact(graph, n / 2, profile_options);
  }
  report.final_config = config;

  report.tau = phases * T;
  std::uint64_t grand_sum = 0;
  for (int v = 0; v < n; ++v) {
    report.max_total_modifications = std::max(report.max_total_modifications, totals[v]);
    grand_sum += totals[v];
  }
  report.mean_total_modifications = static_cast<double>(grand_sum) / n;
  report.modification_budget = 16.0 * report.tau;
  report.budget_tail_bound = poisson_rewiring_tail(report.tau, 2.0);
  return report;
}

// --------------------------------------------------------------------------
// Campaigns
// --------------------------------------------------------------------------

namespace {

std::vector<double> default_t_grid() {
  std::vector<double> grid;
  const double lo = 0.01, hi = 20.0;
  for (int i = 0; i < 20; ++i) {
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / 19.0));
  }
  return grid;
}

std::uint64_t campaign_stream(int n, int seed_index) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(seed_index);
}

std::vector<int> clamp_k_list(const std::vector<int>& k_list, int kmax) {
  std::vector<int> out;
  for (int k : k_list) out.push_back(std::min(std::max(k, 1), kmax));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);
  }
  return perm;
}

std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> pool = random_permutation(n, rng);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

SpreadCampaignResult verify_spread_campaign(const SpreadCampaignParams& params) {
  const std::vector<double> t_grid = params.t_grid.empty() ? default_t_grid() : params.t_grid;
  SpreadCampaignResult result;
  result.min_slack = std::numeric_limits<double>::infinity();

  for (int n : params.n_list) {
    for (int s = 0; s < params.seeds_per_n; ++s) {
      Rng rng(params.seed, campaign_stream(n, s));
      const PointerConfig config = make_random_config(n, rng);
      const PhaseGraph graph = build_phase_graph(config, Color::Red);
      const LaplacianView lap = LaplacianView::from_graph(graph);
      const IsoProfile profile = profile_exact(graph, n / 2);
      const MassVector pi0 = make_point_mass(n, static_cast<int>(rng.uniform_int(n)));
      ++result.graphs;

      for (int k : clamp_k_list(params.k_list, n / 2)) {
        const SpreadReport report = check_partial_spread(
            lap, k, profile.phi_ratio[k], pi0, t_grid, thresholds::kTolInequality);
        result.instances += report.checks;
        result.violations += report.violations.size();
        result.min_slack = std::min(result.min_slack, report.min_slack);
      }
    }
  }
  if (result.instances == 0) result.min_slack = 0.0;
  return result;
}

CollapseCampaignResult verify_collapse_campaign(const CollapseCampaignParams& params) {
  CollapseCampaignResult result;
  result.min_ratio = std::numeric_limits<double>::infinity();

  for (int n : params.n_list) {
    for (int s = 0; s < params.seeds_per_n; ++s) {
      Rng rng(params.seed, campaign_stream(n, s));
      const PointerConfig config = make_random_config(n, rng);
      const PhaseGraph graph = build_phase_graph(config, Color::Red);
      const LaplacianView lap = LaplacianView::from_graph(graph);
      const IsoProfile profile = profile_exact(graph, n / 2);
      const MassVector pi0 = make_point_mass(n, static_cast<int>(rng.uniform_int(n)));
      ++result.graphs;

      // Ordering candidates: random permutations plus the sorted orders the
      // collapse construction actually uses at a few diffusion times.
      std::vector<std::vector<int>> orderings;
      for (int r = 0; r < params.random_orderings; ++r) {
        orderings.push_back(random_permutation(n, rng));
      }
      for (double t : params.sort_times) {
        orderings.push_back(sorted_desc_order(heat_kernel(lap, pi0, t).values));
      }

      for (int k : clamp_k_list(params.k_list, n / 2)) {
        for (const auto& order : orderings) {
          const CollapseCheck check = check_collapsed_gap(lap, order, k, profile.phi_ratio[k],
                                                          thresholds::kTolInequality);
          ++result.instances;
          if (!check.ok) ++result.violations;
          if (check.lambda_star > 0.0) {
            result.min_ratio = std::min(result.min_ratio, check.lambda2 / check.lambda_star);
          }
        }
      }
    }
  }
  if (result.instances == 0) result.min_ratio = 0.0;
  return result;
}

MajorizationCampaignResult verify_majorization_campaign(const MajorizationCampaignParams& params) {
  if (!(params.d >= 4.0)) {
    throw std::invalid_argument("majorization campaign needs d >= 4 so the lattice step d/4 >= 1");
  }
  if (params.t_points < 2) throw std::invalid_argument("need at least two grid times");

  std::vector<double> t_grid;
  const double t_lo = 0.1;
  for (int i = 0; i < params.t_points; ++i) {
    t_grid.push_back(t_lo *
                     std::pow(params.t_max / t_lo,
                              static_cast<double>(i) / (params.t_points - 1)));
  }

  MajorizationCampaignResult result;
  result.max_excess = -std::numeric_limits<double>::infinity();

  for (int n : params.n_list) {
    for (int s = 0; s < params.seeds_per_n; ++s) {
      Rng rng(params.seed, campaign_stream(n, s));
      const PointerConfig config = make_random_config(n, rng);
      const PhaseGraph graph = build_phase_graph(config, Color::Red);
      const LaplacianView lap = LaplacianView::from_graph(graph);
      ++result.graphs;

      const GapResult gap = spectral_gap(lap);
      const double gamma_cert = certified_gamma_floor(gap.lambda2);
      if (!(gamma_cert > 0.0)) continue;
      const double kappa_d = 4.0 / gamma_cert * params.d;
      const int k_lo = std::max(1, static_cast<int>(std::ceil(kappa_d - 1e-12)));
      if (k_lo > n / 2) continue;  // admissible range [kappa d, n/2] is empty
      ++result.eligible_graphs;

      std::vector<int> k_set = {k_lo, n / 2};
      k_set.erase(std::unique(k_set.begin(), k_set.end()), k_set.end());

      for (int k : k_set) {
        const MassVector pi0 = make_uniform_mass(n, random_subset(n, k, rng));
        MajorizationInstance inst;
        inst.n = n;
        inst.graph_index = s;
        inst.k = k;
        inst.lambda2 = gap.lambda2;
        inst.gamma_cert = gamma_cert;
        inst.kappa_d = kappa_d;
        inst.max_excess = -std::numeric_limits<double>::infinity();

        bool violated = false;
        double nu_prefix_k_final = 1.0;
        for (double t : t_grid) {
          const MassVector pi_t = heat_kernel(lap, pi0, t);
          const std::vector<double> pi_prefix = sorted_prefix_sums(pi_t.values);
          const NuResult nu = aux_nu_process(n, k, gamma_cert, params.d, t);
          double nu_prefix = 0.0;
          for (int i = 1; i <= n; ++i) {
            nu_prefix += nu.nu.values[i - 1];
            const double excess = pi_prefix[i] - nu_prefix;
            inst.max_excess = std::max(inst.max_excess, excess);
            if (excess > thresholds::kTolSemigroup) violated = true;
            if (i == k && t == t_grid.back()) nu_prefix_k_final = nu_prefix;
          }
        }

        inst.escaped_mass = k * (1.0 - nu_prefix_k_final);
        inst.chain_target = params.d / gamma_cert;
        inst.chain_ratio = inst.escaped_mass / inst.chain_target;

        ++result.instances;
        if (violated) ++result.violations;
        result.max_excess = std::max(result.max_excess, inst.max_excess);
        result.records.push_back(inst);
      }
    }
  }
  if (result.instances == 0) result.max_excess = 0.0;
  return result;
}

}  // namespace rewire
