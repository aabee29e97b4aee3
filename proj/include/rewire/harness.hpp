#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rewire/interchange.hpp"
#include "rewire/isoperimetry.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/spectral.hpp"
#include "rewire/stats.hpp"

namespace rewire {

// ---------------------------------------------------------------------------
// Experiment configuration: flat `key = value` lines, insertion-ordered, so
// a config file doubles as a record of exactly what was run.  '#' starts a
// comment.
// ---------------------------------------------------------------------------
struct ExperimentConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  static ExperimentConfig parse(const std::string& text);
  std::string emit() const;

  bool contains(const std::string& key) const;
  void set(const std::string& key, const std::string& value);  // insert or replace
  const std::string& get(const std::string& key) const;        // throws if absent
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;

  bool operator==(const ExperimentConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Stationarity: the moved color's permutation against uniform over S_n.
// ---------------------------------------------------------------------------
struct UniformityReport {
  int n = 0;
  double phase_length = 0.0;
  std::uint64_t replicas = 0;
  ChiSquareResult chi;
};

// Runs `replicas` independent blue phases of length `phase_length` from the
// canonical configuration and bins the final blue permutation over all n!
// cells.  Requires 3 <= n <= 5 and n! * 20 <= replicas so expected cell
// counts stay comfortably above the chi-square validity floor.
UniformityReport uniformity_test(int n, double phase_length, std::uint64_t replicas,
                                 std::uint64_t seed, bool parallel = true);

// ---------------------------------------------------------------------------
// Occupancy duality: the moving pointers issued from a node set S occupy
// targets whose indicator mean evolves exactly by the phase-graph heat
// kernel.  Empirical occupancy is compared per node against that evolution.
// ---------------------------------------------------------------------------
struct DualityReport {
  int n = 0;
  double phase_length = 0.0;
  std::uint64_t replicas = 0;
  std::vector<int> members;       // pointer owners tracked
  std::vector<double> empirical;  // per-node occupancy frequency at the end
  std::vector<double> analytic;   // heat-kernel evolution of initial targets
  double max_abs_deviation = 0.0;
  double max_sigma_ratio = 0.0;  // |deviation| / per-node sigma floor
  bool ok = false;               // max_sigma_ratio <= thresholds::kSigmaEnvelope
};

DualityReport exclusion_duality_test(const PointerConfig& config, const std::vector<int>& members,
                                     double phase_length, std::uint64_t replicas,
                                     std::uint64_t seed, bool parallel = true);

// ---------------------------------------------------------------------------
// Mean and lower tail of the outgoing moving-color cut after one phase.
// ---------------------------------------------------------------------------
struct TailCheck {
  double r = 0.0;          // fraction of the mean floor
  double threshold = 0.0;  // r * mean floor
  double frequency = 0.0;  // empirical P(cut <= threshold)
  double bound = 0.0;      // exp(-floor * h(r))
  bool ok = false;         // frequency <= bound + 3 sigma
};

struct MeanCutReport {
  int n = 0;
  int set_size = 0;
  double phase_length = 0.0;
  std::uint64_t replicas = 0;
  double mean_floor = 0.0;       // (1/(2 gamma)) min(gamma |S|, 2d)
  double empirical_mean = 0.0;
  double ratio = 0.0;            // empirical_mean / mean_floor
  double stationary_mean = 0.0;  // |S|(n-|S|)/n, the uniform-permutation value
  std::vector<TailCheck> tails;
  bool ok = false;  // empirical_mean >= mean_floor and every tail check ok
};

MeanCutReport mean_cut_test(const PointerConfig& config, const std::vector<int>& members,
                            double phase_length, std::uint64_t replicas, double gamma, double d,
                            std::uint64_t seed, bool parallel = true);

// ---------------------------------------------------------------------------
// Bootstrap: alternate phases from a random configuration, doubling the cut
// saturation level d_f = 2^(f+1), and check the expansion hypothesis of the
// graph each phase runs on (exact profiles when n fits the budget).
// ---------------------------------------------------------------------------
struct BootstrapParams {
  int n = 0;
  double gamma = 0.0;
  int num_phases = 0;        // 0 = ceil(log2 n)
  double phase_length = 0.0; // ignored if a_exponent set
  std::optional<double> a_exponent;
  int profile_budget = 22;   // exact verification iff n <= budget
  std::uint64_t seed = 0;

  void validate() const;
  int resolved_phases() const;
};

struct BootstrapPhaseRecord {
  int phase = 0;
  Color moved = Color::Blue;
  double d_f = 0.0;  // 2^(phase+1)
  bool hypothesis_checked = false;
  bool hypothesis_holds = false;
  int first_violation_k = 0;
  std::uint64_t max_modifications = 0;  // this phase only
  double mean_modifications = 0.0;
};

struct BootstrapReport {
  int n = 0;
  double gamma = 0.0;
  double phase_length = 0.0;
  bool exact_mode = false;
  std::vector<BootstrapPhaseRecord> phases;
  std::optional<IsoProfile> final_profile;  // of the next phase's graph
  PointerConfig final_config;
  double tau = 0.0;  // phases * phase_length
  std::uint64_t max_total_modifications = 0;
  double mean_total_modifications = 0.0;
  double modification_budget = 0.0;  // 16 tau
  double budget_tail_bound = 0.0;    // exp(-8 tau h(2))
};

BootstrapReport run_bootstrap(const BootstrapParams& params);

// ---------------------------------------------------------------------------
// Falsification campaigns over random phase graphs.
// ---------------------------------------------------------------------------
struct SpreadCampaignParams {
  std::vector<int> n_list = {12, 14, 16};
  int seeds_per_n = 10;
  std::vector<int> k_list = {1, 2, 4, 8};  // clamped to n/2, deduplicated
  std::vector<double> t_grid;              // empty = 20 log-spaced in [0.01, 20]
  std::uint64_t seed = 0;
};

struct SpreadCampaignResult {
  std::uint64_t graphs = 0;
  std::uint64_t instances = 0;  // (graph, k, s, t) checks
  std::uint64_t violations = 0;
  double min_slack = 0.0;
};

SpreadCampaignResult verify_spread_campaign(const SpreadCampaignParams& params);

struct CollapseCampaignParams {
  std::vector<int> n_list = {10, 12, 14, 16};
  int seeds_per_n = 5;
  std::vector<int> k_list = {1, 2, 3, 4, 6, 8};  // clamped to n/2, deduplicated
  int random_orderings = 8;
  std::vector<double> sort_times = {0.05, 0.3, 1.0, 5.0};  // sorted-order candidates
  std::uint64_t seed = 0;
};

struct CollapseCampaignResult {
  std::uint64_t graphs = 0;
  std::uint64_t instances = 0;  // (graph, ordering, k) checks
  std::uint64_t violations = 0;
  double min_ratio = 0.0;  // min lambda2(collapsed) / lambda2_star
};

CollapseCampaignResult verify_collapse_campaign(const CollapseCampaignParams& params);

// Majorization of sorted prefix mass by the +-d' lattice walk.  Expansion is
// certified spectrally: |E(S,~S)| >= lambda2 |S||~S|/n gives the hypothesis
// floor with gamma = lambda2/2 at sizes where exact profiling is infeasible,
// and the campaign keeps only (graph, k) pairs with k in [kappa d, n/2],
// kappa = 4/gamma, where the dominance statement applies.
struct MajorizationCampaignParams {
  std::vector<int> n_list = {160, 192};
  int seeds_per_n = 30;
  double d = 4.0;     // jump scale; d' = floor(d/4)
  int t_points = 10;
  double t_max = 30.0;
  std::uint64_t seed = 0;
};

struct MajorizationInstance {
  int n = 0;
  int graph_index = 0;
  int k = 0;
  double lambda2 = 0.0;
  double gamma_cert = 0.0;
  double kappa_d = 0.0;      // (4/gamma_cert) * d
  double max_excess = 0.0;   // max over (i, t) of pi_[i] - nu_[i]
  // Constant-chain measurement, reported not asserted: the escaped mass
  // k (1 - nu_[k](t_max)) against the target d/gamma_cert.
  double escaped_mass = 0.0;
  double chain_target = 0.0;
  double chain_ratio = 0.0;
};

struct MajorizationCampaignResult {
  std::uint64_t graphs = 0;
  std::uint64_t eligible_graphs = 0;
  std::uint64_t instances = 0;  // (graph, k) pairs
  std::uint64_t violations = 0;
  double max_excess = 0.0;
  std::vector<MajorizationInstance> records;
};

MajorizationCampaignResult verify_majorization_campaign(const MajorizationCampaignParams& params);

}  // namespace rewire
