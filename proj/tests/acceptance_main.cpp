// Acceptance gate: one self-contained check per shipped guarantee, each
// printing exactly one PASS/FAIL line with its pinned tolerances.  The exit
// code is the number of failed checks.  `--criterion N` runs a single one.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rewire/harness.hpp"
#include "rewire/interchange.hpp"
#include "rewire/io.hpp"
#include "rewire/isoperimetry.hpp"
#include "rewire/paths.hpp"
#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"
#include "rewire/spectral.hpp"
#include "rewire/stats.hpp"

namespace {

using nlohmann::json;
using namespace rewire;

constexpr std::uint64_t kSeed = 12345;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buffer[512];
  va_list args;
  va_start(args, pattern);
  vsnprintf(buffer, sizeof(buffer), pattern, args);
  va_end(args);
  return buffer;
}

// --------------------------------------------------------------------------
// 1. Structural invariants: fuzzed event sequences preserve the pointer
//    bijection and 4-regularity; the cut identity holds exhaustively.
// --------------------------------------------------------------------------
Outcome criterion_structural() {
  std::uint64_t sequences = 0;
  for (int n : {4, 8, 16}) {
    for (int trial = 0; trial < 34000; ++trial) {
      Rng rng(kSeed, (static_cast<std::uint64_t>(n) << 32) | trial);
      PointerConfig config = make_random_config(n, rng);
      const Color moving = rng.uniform() < 0.5 ? Color::Red : Color::Blue;
      const PhaseGraph graph = build_phase_graph(config, other_color(moving));
      InterchangeKernel kernel(graph);
      RewiringStats stats;
      const int events = 1 + static_cast<int>(rng.uniform_int(64));
      std::vector<int>& perm = config.perm(moving);
      for (int e = 0; e < events; ++e) {
        kernel.fire(perm, static_cast<int>(rng.uniform_int(graph.edges.size())), stats);
      }
      ++sequences;
      config.validate();  // throws if the bijection broke
      for (Color c : {Color::Red, Color::Blue}) {
        const PhaseGraph rebuilt = build_phase_graph(config, c);
        if (rebuilt.edges.size() != static_cast<std::size_t>(2 * n)) {
          return {false, fmt("edge count broke after %" PRIu64 " sequences", sequences)};
        }
        for (int v = 0; v < n; ++v) {
          if (rebuilt.degree(v) != 4) {
            return {false, fmt("degree broke after %" PRIu64 " sequences", sequences)};
          }
        }
      }
    }
  }

  std::uint64_t cuts = 0;
  Rng rng(kSeed, 999);
  for (int n : {10, 12}) {
    for (int trial = 0; trial < 3; ++trial) {
      const PointerConfig config =
          trial == 0 ? make_canonical_config(n) : make_random_config(n, rng);
      for (Color fixed : {Color::Red, Color::Blue}) {
        const PhaseGraph graph = build_phase_graph(config, fixed);
        for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
          const Cut cut = cut_info(config, fixed, mask_to_members(n, mask));
          ++cuts;
          if (cut.boundary_total != cut.boundary_pointer + 2 * cut.arcs ||
              cut.boundary_total != edge_boundary_mask(graph, mask)) {
            return {false, fmt("cut identity broke at n=%d mask=%" PRIu64, n, mask)};
          }
        }
      }
    }
  }
  return {true, fmt("sequences=%" PRIu64 " cut_sets=%" PRIu64, sequences, cuts)};
}

// --------------------------------------------------------------------------
// 2. Stationarity: long phases land uniformly on the permutation group
//    (chi-square at p > 0.001).
// --------------------------------------------------------------------------
Outcome criterion_stationarity() {
  const UniformityReport small = uniformity_test(3, 100.0, 100000, kSeed);
  const UniformityReport large = uniformity_test(4, 100.0, 1000000, kSeed + 1);
  const bool pass = small.chi.ok && large.chi.ok;
  return {pass, fmt("p(n=3)=%.4f p(n=4)=%.4f threshold=%.3g", small.chi.p_value,
                    large.chi.p_value, thresholds::kMinPValue)};
}

// --------------------------------------------------------------------------
// 3. Occupancy duality: tracked-pointer occupancy means match the heat
//    kernel within 3 sigma at 1e5 replicas.
// --------------------------------------------------------------------------
Outcome criterion_duality() {
  double worst = 0.0;
  int runs = 0;
  for (int n : {8, 16}) {
    for (int s : {1, n / 4, n / 2}) {
      std::vector<int> members(s);
      for (int i = 0; i < s; ++i) members[i] = i;
      for (double t : {0.5, 2.0, 8.0}) {
        const DualityReport report = exclusion_duality_test(
            make_canonical_config(n), members, t, 100000, kSeed + 100 + runs);
        ++runs;
        worst = std::max(worst, report.max_sigma_ratio);
        if (!report.ok) {
          return {false, fmt("n=%d |S|=%d T=%.1f sigma_ratio=%.2f > %.1f", n, s, t,
                             report.max_sigma_ratio, thresholds::kSigmaEnvelope)};
        }
      }
    }
  }
  return {true, fmt("runs=%d worst_sigma_ratio=%.2f limit=%.1f", runs, worst,
                    thresholds::kSigmaEnvelope)};
}

// --------------------------------------------------------------------------
// 4. Rewiring rate: per-node modification counts average 8T per phase
//    (within 10%) and obey the doubled-mean Poisson tail bound.
// --------------------------------------------------------------------------
Outcome criterion_rewiring_rate() {
  const int n = 16;
  const double t = 5.0;
  const std::uint64_t replicas = 100;
  const PointerConfig config = make_canonical_config(n);

  std::uint64_t total = 0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    Rng rng(kSeed + 200, r);
    const PhaseResult phase = simulate_phase(config, Color::Blue, t, rng);
    for (std::uint32_t m : phase.stats.per_node_modifications) total += m;
  }
  const double mean = static_cast<double>(total) / (n * replicas);
  const double target = 8.0 * t;
  const bool mean_ok = std::abs(mean - target) <= 0.10 * target;

  std::string tail_detail;
  bool tails_ok = true;
  for (double tau : {1.0, 5.0}) {
    const std::uint64_t tail_replicas = 1000;
    const double threshold = 16.0 * tau;
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < tail_replicas; ++r) {
      Rng rng(kSeed + 300 + static_cast<std::uint64_t>(tau), r);
      const PhaseResult phase = simulate_phase(config, Color::Blue, tau, rng);
      for (std::uint32_t m : phase.stats.per_node_modifications) {
        if (m >= threshold) ++hits;
      }
    }
    const double freq = static_cast<double>(hits) / (n * tail_replicas);
    const double bound = poisson_rewiring_tail(tau, 2.0);
    tails_ok = tails_ok && freq <= bound;
    tail_detail += fmt(" tail(tau=%g)=%.2e<=%.2e", tau, freq, bound);
  }
  return {mean_ok && tails_ok,
          fmt("mean=%.2f target=%.0f(+-10%%)%s", mean, target, tail_detail.c_str())};
}

// --------------------------------------------------------------------------
// 5. Partial spread inequality: zero violations across the exactly-profiled
//    campaign at tolerance 1e-9.
// --------------------------------------------------------------------------
Outcome criterion_spread() {
  SpreadCampaignParams params;
  params.seed = kSeed;
  const SpreadCampaignResult result = verify_spread_campaign(params);
  const bool pass = result.violations == 0 && result.instances >= 500;
  return {pass, fmt("instances=%d violations=%d min_slack=%.3g tol=%.0e", result.instances,
                    result.violations, result.min_slack, thresholds::kTolInequality)};
}

// --------------------------------------------------------------------------
// 6. Collapsed spectral gap: lambda2 of every collapsed graph clears the
//    profile rate phi^2/(2*max_degree) for arbitrary orderings.
// --------------------------------------------------------------------------
Outcome criterion_collapse() {
  CollapseCampaignParams params;
  params.seed = kSeed;
  const CollapseCampaignResult result = verify_collapse_campaign(params);
  const bool pass = result.violations == 0 && result.instances >= 500;
  return {pass, fmt("instances=%d violations=%d min_gap_ratio=%.3f tol=%.0e", result.instances,
                    result.violations, result.min_ratio, thresholds::kTolInequality)};
}

// --------------------------------------------------------------------------
// 7. Spectral gap vs expansion ratio: lambda2 >= phi_ratio(n/2)^2 / (2*4) on
//    every exactly profiled graph.
// --------------------------------------------------------------------------
Outcome criterion_gap_floor() {
  int instances = 0;
  double min_margin = 1e9;
  for (int n : {10, 12, 14, 16}) {
    for (int s = 0; s < 5; ++s) {
      Rng rng(kSeed, (static_cast<std::uint64_t>(n) << 32) | (7000 + s));
      const PointerConfig config = make_random_config(n, rng);
      for (Color fixed : {Color::Red, Color::Blue}) {
        const PhaseGraph graph = build_phase_graph(config, fixed);
        const IsoProfile profile = profile_exact(graph, n / 2);
        const GapResult gap = spectral_gap(LaplacianView::from_graph(graph));
        const double floor = lambda_star(profile.phi_ratio[n / 2], 4.0);
        ++instances;
        min_margin = std::min(min_margin, gap.lambda2 - floor);
        if (gap.lambda2 < floor - thresholds::kTolInequality) {
          return {false, fmt("n=%d seed=%d lambda2=%.6f < floor=%.6f", n, s, gap.lambda2, floor)};
        }
      }
    }
  }
  return {true, fmt("instances=%d min_margin=%.4f tol=%.0e", instances, min_margin,
                    thresholds::kTolInequality)};
}

// --------------------------------------------------------------------------
// 8. Sorted-mass derivative: the pairing bound dominates the exact
//    derivative on hypothesis-satisfying graphs, and the exact derivative
//    matches finite differences to 1e-4 relative error.
// --------------------------------------------------------------------------
Outcome criterion_derivative() {
  int instances = 0;
  int fd_checks = 0;
  double min_slack = 1e9;
  double worst_fd = 0.0;
  for (int n : {12, 14, 16}) {
    for (int s = 0; s < 3; ++s) {
      Rng rng(kSeed, (static_cast<std::uint64_t>(n) << 32) | (8000 + s));
      const PointerConfig config = make_random_config(n, rng);
      for (Color fixed : {Color::Red, Color::Blue}) {
        const PhaseGraph graph = build_phase_graph(config, fixed);
        const IsoProfile profile = profile_exact(graph, n / 2);
        // Profile-certified parameters: gamma under every per-size ratio and
        // d at the global minimum cut keep min(gamma*k, d) <= phi_card[k].
        double gamma = 1.0;
        for (int k = 1; k <= profile.kmax; ++k) {
          gamma = std::min(gamma, profile.phi_card[k] / static_cast<double>(k));
        }
        gamma = std::min(gamma, 0.95);
        const double d = profile.phi_card[profile.kmax];
        if (!check_hypothesis(profile, ExpansionHypothesis{gamma, d}).holds) continue;

        const LaplacianView lap = LaplacianView::from_graph(graph);
        for (double t : {0.05, 0.3, 1.5}) {
          const MassVector pi = heat_kernel(lap, make_point_mass(n, 0), t);
          for (int m = 1; m <= n / 2; ++m) {
            const DerivativeBound bound = sorted_mass_derivative_bound(lap, pi, m, gamma, d);
            ++instances;
            min_slack = std::min(min_slack, bound.rhs - bound.lhs);
            if (bound.lhs > bound.rhs + thresholds::kTolInequality) {
              return {false, fmt("bound broke: n=%d t=%.2f m=%d lhs=%.6f rhs=%.6f", n, t, m,
                                 bound.lhs, bound.rhs)};
            }
          }
          // Finite-difference cross-check with the top-m membership frozen.
          const std::vector<int> order = sorted_desc_order(pi.values);
          for (int m : {2, n / 4, n / 2}) {
            const DerivativeBound bound = sorted_mass_derivative_bound(lap, pi, m, gamma, d);
            const double h = 1e-6;
            const auto top_mass = [&](double dt) {
              const MassVector at = heat_kernel(lap, pi, dt);
              double sum = 0.0;
              for (int i = 0; i < m; ++i) sum += at.values[order[i]];
              return sum;
            };
            const double numeric =
                (4.0 * top_mass(h) - 3.0 * top_mass(0.0) - top_mass(2.0 * h)) / (2.0 * h);
            const double scale = std::max({std::abs(bound.lhs), std::abs(numeric), 1e-9});
            const double rel = std::abs(bound.lhs - numeric) / scale;
            ++fd_checks;
            worst_fd = std::max(worst_fd, rel);
            if (rel > thresholds::kTolDerivativeRel) {
              return {false, fmt("derivative mismatch: n=%d m=%d analytic=%.8f numeric=%.8f", n,
                                 m, bound.lhs, numeric)};
            }
          }
        }
      }
    }
  }
  const bool pass = instances >= 100;
  return {pass, fmt("instances=%d fd_checks=%d min_slack=%.3g worst_fd_rel=%.2e", instances,
                    fd_checks, min_slack, worst_fd)};
}

// --------------------------------------------------------------------------
// 9. Lattice majorization: sorted prefix mass stays below the frozen-window
//    lattice walk on certified-expansion graphs (tolerance 1e-8).
// --------------------------------------------------------------------------
Outcome criterion_majorization() {
  MajorizationCampaignParams params;
  params.seed = kSeed;
  const MajorizationCampaignResult result = verify_majorization_campaign(params);
  double mean_chain = 0.0;
  for (const auto& rec : result.records) mean_chain += rec.chain_ratio;
  if (!result.records.empty()) mean_chain /= static_cast<double>(result.records.size());
  const bool pass = result.violations == 0 && result.instances >= 50;
  return {pass, fmt("instances=%d (eligible graphs=%d/%d) violations=%d max_excess=%.2e "
                    "tol=%.0e escaped/chain=%.2f",
                    result.instances, result.eligible_graphs, result.graphs, result.violations,
                    result.max_excess, thresholds::kTolSemigroup, mean_chain)};
}

// --------------------------------------------------------------------------
// 10. Canonical path system: full coverage with bounded node visits on 20
//     seeded graphs, and the exact endpoint-hit floor 1/(2n) wherever the
//     spectral premise holds.
// --------------------------------------------------------------------------
Outcome criterion_paths() {
  const int n = 16;
  const int runs = 20;
  int good = 0;
  int premise_runs = 0;
  int floor_failures = 0;
  double min_hit = 1.0;
  for (int s = 0; s < runs; ++s) {
    Rng rng(kSeed, 10000 + s);
    const PhaseGraph graph = build_phase_graph(make_random_config(n, rng), Color::Red);
    PathOptions options;
    options.gamma = 0.5;
    const PathSystem system = build_path_system(graph, options, kSeed + s);
    const double visit_cap = 9.0 * n * std::log(n) * system.path_length;
    if (system.coverage == 1.0 && system.max_node_visits <= visit_cap) ++good;

    const HitProbReport hits = hit_probability_check(graph, system.path_length, false);
    if (hits.premise_holds) {
      ++premise_runs;
      min_hit = std::min(min_hit, hits.min_hit);
      if (!hits.floor_holds) ++floor_failures;
    }
  }
  const bool pass = good >= 19 && floor_failures == 0;
  return {pass, fmt("coverage+visits ok=%d/%d premise_held=%d/%d hit_floor_failures=%d "
                    "min_hit=%.4f floor=%.4f",
                    good, runs, premise_runs, runs, floor_failures, min_hit, 1.0 / (2.0 * n))};
}

// --------------------------------------------------------------------------
// 11. Arc-set counting: the number of size-k subsets with exactly l cycle
//     arcs never exceeds n^(2l), exhaustively over n <= 16.
// --------------------------------------------------------------------------
Outcome criterion_counting() {
  std::uint64_t checks = 0;
  for (int n = 3; n <= 16; ++n) {
    for (int k = 1; k <= n / 2; ++k) {
      for (int l = 1; l <= k; ++l) {
        const std::uint64_t count = count_arc_sets(n, k, l);
        ++checks;
        // n^(2l) overflows 64 bits only past 2l*log2(n) >= 64, where the
        // 64-bit count is below it automatically.
        const double bits = 2.0 * l * std::log2(static_cast<double>(n));
        if (bits < 63.0) {
          std::uint64_t bound = 1;
          for (int e = 0; e < 2 * l; ++e) bound *= static_cast<std::uint64_t>(n);
          if (count > bound) {
            return {false, fmt("count(n=%d,k=%d,l=%d)=%" PRIu64 " > n^(2l)=%" PRIu64, n, k, l,
                               count, bound)};
          }
        }
      }
    }
  }
  return {true, fmt("checks=%" PRIu64 " over n<=16", checks)};
}

// --------------------------------------------------------------------------
// 12. Bootstrap base phase: the cycle guarantees the d=2 expansion floor for
//     every seeded initial configuration; later phases reported only.
// --------------------------------------------------------------------------
Outcome criterion_bootstrap() {
  const int n = 22;
  const int seeds = 100;
  int holds = 0;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(kSeed, 12000 + s);
    const PointerConfig config = make_random_config(n, rng);
    const PhaseGraph graph = build_phase_graph(config, Color::Red);  // first moving color is blue
    const IsoProfile profile = profile_exact(graph, n / 2);
    if (check_hypothesis(profile, ExpansionHypothesis{0.25, 2.0}).holds) ++holds;
  }

  // Descriptive tail: later doubling levels on full pipeline runs.
  std::string descriptive;
  for (std::uint64_t s = 0; s < 3; ++s) {
    BootstrapParams params;
    params.n = 16;
    params.gamma = 0.25;
    params.phase_length = 4.0;
    params.seed = kSeed + 400 + s;
    const BootstrapReport report = run_bootstrap(params);
    int held = 0;
    int checked = 0;
    for (const auto& phase : report.phases) {
      if (!phase.hypothesis_checked) continue;
      ++checked;
      if (phase.hypothesis_holds) ++held;
    }
    descriptive += fmt("%s%d/%d", s ? "," : "", held, checked);
  }
  const bool pass = holds == seeds;
  return {pass, fmt("phase0 d=2 holds=%d/%d (n=%d); later phases held %s (descriptive)", holds,
                    seeds, n, descriptive.c_str())};
}

// --------------------------------------------------------------------------
// 13. Determinism: identical seeds reproduce reports byte for byte.
// --------------------------------------------------------------------------
Outcome criterion_determinism() {
  const auto spread_dump = [] {
    SpreadCampaignParams params;
    params.n_list = {10, 12};
    params.seeds_per_n = 2;
    params.seed = kSeed;
    const SpreadCampaignResult result = verify_spread_campaign(params);
    json report = make_report_base("verify-spread", kSeed, "n = 10,12\nseeds = 2\n");
    report["instances"] = result.instances;
    report["violations"] = result.violations;
    report["min_slack"] = result.min_slack;
    return report.dump(2);
  };
  const auto bootstrap_dump = [] {
    BootstrapParams params;
    params.n = 14;
    params.gamma = 0.25;
    params.phase_length = 2.0;
    params.seed = kSeed;
    const BootstrapReport report = run_bootstrap(params);
    return config_to_text(report.final_config) +
           fmt("max=%" PRIu64 " mean=%.17g", report.max_total_modifications,
               report.mean_total_modifications);
  };
  const auto paths_dump = [] {
    Rng rng(kSeed, 13000);
    const PhaseGraph graph = build_phase_graph(make_random_config(12, rng), Color::Blue);
    PathOptions options;
    options.gamma = 0.5;
    options.walks_per_source = 50;
    const PathSystem system = build_path_system(graph, options, kSeed);
    std::string out;
    for (std::uint64_t v : system.node_visits) out += std::to_string(v) + ",";
    out += std::to_string(system.congestion);
    return out;
  };

  const bool pass = spread_dump() == spread_dump() && bootstrap_dump() == bootstrap_dump() &&
                    paths_dump() == paths_dump();
  return {pass, pass ? "spread/bootstrap/paths reports byte-identical across reruns"
                     : "a rerun produced different bytes"};
}

struct Criterion {
  int index;
  const char* label;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "structural invariants", criterion_structural},
    {2, "stationary uniformity", criterion_stationarity},
    {3, "occupancy duality", criterion_duality},
    {4, "rewiring rate", criterion_rewiring_rate},
    {5, "partial spread inequality", criterion_spread},
    {6, "collapsed spectral gap", criterion_collapse},
    {7, "gap vs expansion ratio", criterion_gap_floor},
    {8, "sorted-mass derivative bound", criterion_derivative},
    {9, "lattice majorization", criterion_majorization},
    {10, "canonical path system", criterion_paths},
    {11, "arc-set counting bound", criterion_counting},
    {12, "bootstrap base phase", criterion_bootstrap},
    {13, "seeded determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  int ran = 0;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.index != only) continue;
    const Outcome outcome = criterion.run();
    ++ran;
    if (!outcome.pass) ++failures;
    std::printf("criterion %02d %s  %s: %s\n", criterion.index, outcome.pass ? "PASS" : "FAIL",
                criterion.label, outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched %d\n", only);
    return 2;
  }
  return failures;
}
