// Command-line front end: one binary, one subcommand per experiment kind.
// Exit codes: 0 = ran clean, 1 = an invariant/inequality violation was found,
// 2 = usage or input error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rewire/harness.hpp"
#include "rewire/interchange.hpp"
#include "rewire/io.hpp"
#include "rewire/isoperimetry.hpp"
#include "rewire/paths.hpp"
#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/spectral.hpp"
#include "rewire/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using namespace rewire;

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 12345;
  std::string out = "-";
  std::string format = "json";
  int threads = 0;
  ExperimentConfig file;
};

// Values come from, in priority order: explicit flag, config-file key (same
// name as the flag without dashes), built-in default.
bool flag_given(const CLI::App* cmd, const std::string& flag) { return cmd->count(flag) > 0; }

void overlay_u64(const CLI::App* cmd, const ExperimentConfig& file, const std::string& flag,
                 const std::string& key, std::uint64_t& value) {
  if (!flag_given(cmd, flag) && file.contains(key)) value = file.get_u64(key, value);
}

void overlay_int(const CLI::App* cmd, const ExperimentConfig& file, const std::string& flag,
                 const std::string& key, int& value) {
  if (!flag_given(cmd, flag) && file.contains(key)) {
    value = static_cast<int>(file.get_double(key, value));
  }
}

void overlay_double(const CLI::App* cmd, const ExperimentConfig& file, const std::string& flag,
                    const std::string& key, double& value) {
  if (!flag_given(cmd, flag) && file.contains(key)) value = file.get_double(key, value);
}

void overlay_string(const CLI::App* cmd, const ExperimentConfig& file, const std::string& flag,
                    const std::string& key, std::string& value) {
  if (!flag_given(cmd, flag) && file.contains(key)) value = file.get(key);
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string token;
  for (char c : raw + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  return out;
}

void overlay_int_list(const CLI::App* cmd, const ExperimentConfig& file, const std::string& flag,
                      const std::string& key, std::vector<int>& value) {
  if (flag_given(cmd, flag) || !file.contains(key)) return;
  value.clear();
  for (const auto& tok : split_list(file.get(key))) value.push_back(std::stoi(tok));
}

void overlay_double_list(const CLI::App* cmd, const ExperimentConfig& file,
                         const std::string& flag, const std::string& key,
                         std::vector<double>& value) {
  if (flag_given(cmd, flag) || !file.contains(key)) return;
  value.clear();
  for (const auto& tok : split_list(file.get(key))) value.push_back(std::stod(tok));
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

// Renders a report in the requested format.  The CSV form is a flat
// `key,value` table with JSON-encoded values, so nothing is lost.
std::string render_report(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "csv") {
    std::string out = "key,value\n";
    for (const auto& [key, value] : report.items()) {
      out += key;
      out += ",";
      out += "\"" + value.dump() + "\"";
      out += "\n";
    }
    return out;
  }
  throw std::invalid_argument("unknown format: " + format);
}

void emit_output(const GlobalArgs& global, const std::string& content) {
  if (global.out == "-") {
    std::cout << content;
  } else {
    write_text_file(global.out, content);
  }
}

json report_skeleton(const std::string& kind, const GlobalArgs& global,
                     const ExperimentConfig& resolved) {
  json report = make_report_base(kind, global.seed, resolved.emit());
  json params = json::object();
  for (const auto& [key, value] : resolved.entries) params[key] = value;
  report["params"] = params;
  return report;
}

PointerConfig load_or_random_config(const std::string& graph_path, int random_n,
                                    std::uint64_t seed) {
  if (!graph_path.empty()) return config_from_text(read_text_file(graph_path));
  if (random_n > 0) {
    Rng rng(seed, 0xc0bf16);
    return make_random_config(random_n, rng);
  }
  throw std::invalid_argument("provide --graph <file> or --random-n <n>");
}

Color parse_color(const std::string& name) {
  if (name == "red") return Color::Red;
  if (name == "blue") return Color::Blue;
  throw std::invalid_argument("color must be red or blue");
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  int n = 0;
  int phases = 1;
  double phase_length = 0.0;
  double a_exponent = 0.0;  // 0 = unset
  std::uint64_t replicas = 1;
  bool snapshot_profile = false;
  std::string initial_path;
  std::string counting = "both";
};

int run_simulate(const GlobalArgs& global, const SimulateArgs& args) {
  if (global.out == "-") {
    throw std::invalid_argument("simulate writes files; pass --out <directory>");
  }
  SimParams params;
  params.n = args.n;
  params.num_phases = args.phases;
  params.phase_length = args.phase_length;
  if (args.a_exponent > 0.0) params.a_exponent = args.a_exponent;
  params.validate();
  SimOptions options;
  options.counting =
      args.counting == "owner" ? CountingMode::OwnerOnly : CountingMode::OwnerAndEndpoint;

  std::optional<PointerConfig> initial;
  if (!args.initial_path.empty()) {
    initial = config_from_text(read_text_file(args.initial_path));
  }

  const double t = params.resolved_phase_length();
  std::string csv = "phase,clock,total_swaps,max_Mn,mean_Mn\n";
  std::string snapshots = "phase,k,phi_card,phi_ratio\n";
  std::string final_config_text;

  for (std::uint64_t r = 0; r < args.replicas; ++r) {
    Rng rng(global.seed, r);
    PhaseObserver observer;
    if (args.snapshot_profile && r == 0) {
      observer = [&](int phase, const PointerConfig& config) {
        const Color next = (phase + 1) % 2 == 0 ? Color::Blue : Color::Red;
        const IsoProfile profile =
            profile_exact(build_phase_graph(config, other_color(next)), config.n / 2);
        for (int k = 1; k <= profile.kmax; ++k) {
          snapshots += std::to_string(phase) + "," + std::to_string(k) + "," +
                       std::to_string(profile.phi_card[k]) + "," +
                       format_double(profile.phi_ratio[k]) + "\n";
        }
      };
    }
    const ProtocolResult result = run_protocol(params, rng, initial, options, observer);
    for (const auto& phase : result.phases) {
      std::uint64_t max_m = 0;
      std::uint64_t sum_m = 0;
      for (std::uint32_t m : phase.stats.per_node_modifications) {
        max_m = std::max<std::uint64_t>(max_m, m);
        sum_m += m;
      }
      csv += std::to_string(phase.stats.phase_index) + "," +
             format_double((phase.stats.phase_index + 1) * t) + "," +
             std::to_string(phase.stats.total_swaps) + "," + std::to_string(max_m) + "," +
             format_double(static_cast<double>(sum_m) / params.n) + "\n";
    }
    if (r == 0) final_config_text = config_to_text(result.final_config);
  }

  std::filesystem::create_directories(global.out);
  write_text_file(global.out + "/phases.csv", csv);
  write_text_file(global.out + "/final_config.txt", final_config_text);
  if (args.snapshot_profile) write_text_file(global.out + "/snapshots.csv", snapshots);
  return 0;
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------

struct ProfileArgs {
  std::string graph_path;
  int random_n = 0;
  std::string color = "red";
  int kmax = 0;  // 0 = n/2
  std::string variant = "both";
  bool witnesses = false;
};

std::string witness_text(int n, std::uint64_t mask) {
  std::string out;
  for (int v : mask_to_members(n, mask)) {
    if (!out.empty()) out += "+";
    out += std::to_string(v + 1);
  }
  return out;
}

int run_profile(const GlobalArgs& global, const ProfileArgs& args) {
  const PointerConfig config = load_or_random_config(args.graph_path, args.random_n, global.seed);
  const PhaseGraph graph = build_phase_graph(config, parse_color(args.color));
  const int kmax = args.kmax > 0 ? args.kmax : config.n / 2;
  const IsoProfile profile = profile_exact(graph, kmax);

  const bool want_card = args.variant == "card" || args.variant == "both";
  const bool want_ratio = args.variant == "ratio" || args.variant == "both";
  if (!want_card && !want_ratio) throw std::invalid_argument("variant must be card|ratio|both");

  if (global.format == "csv") {
    std::string csv = "k,phi_card,phi_ratio,witness\n";
    for (int k = 1; k <= profile.kmax; ++k) {
      csv += std::to_string(k) + ",";
      csv += want_card ? std::to_string(profile.phi_card[k]) : "";
      csv += ",";
      csv += want_ratio ? format_double(profile.phi_ratio[k]) : "";
      csv += ",";
      if (args.witnesses) {
        csv += witness_text(config.n,
                            want_card ? profile.witness_card[k] : profile.witness_ratio[k]);
      }
      csv += "\n";
    }
    emit_output(global, csv);
    return 0;
  }

  ExperimentConfig resolved;
  resolved.set("kind", "profile");
  resolved.set("n", std::to_string(config.n));
  resolved.set("kmax", std::to_string(profile.kmax));
  resolved.set("color", args.color);
  json report = report_skeleton("profile", global, resolved);
  json rows = json::array();
  for (int k = 1; k <= profile.kmax; ++k) {
    json row;
    row["k"] = k;
    if (want_card) row["phi_card"] = profile.phi_card[k];
    if (want_ratio) row["phi_ratio"] = profile.phi_ratio[k];
    if (args.witnesses) {
      row["witness"] = witness_text(config.n,
                                    want_card ? profile.witness_card[k] : profile.witness_ratio[k]);
    }
    rows.push_back(row);
  }
  report["rows"] = rows;
  emit_output(global, render_report(report, "json"));
  return 0;
}

// ---------------------------------------------------------------------------
// verify campaigns
// ---------------------------------------------------------------------------

int run_verify_spread(const GlobalArgs& global, const SpreadCampaignParams& params) {
  const SpreadCampaignResult result = verify_spread_campaign(params);
  ExperimentConfig resolved;
  resolved.set("kind", "verify-spread");
  resolved.set("n", join_ints(params.n_list));
  resolved.set("seeds", std::to_string(params.seeds_per_n));
  resolved.set("k", join_ints(params.k_list));
  if (!params.t_grid.empty()) resolved.set("t", join_doubles(params.t_grid));
  json report = report_skeleton("verify-spread", global, resolved);
  report["graphs"] = result.graphs;
  report["instances"] = result.instances;
  report["violations"] = result.violations;
  report["min_slack"] = result.min_slack;
  emit_output(global, render_report(report, global.format));
  return result.violations == 0 ? 0 : 1;
}

int run_verify_collapse(const GlobalArgs& global, const CollapseCampaignParams& params) {
  const CollapseCampaignResult result = verify_collapse_campaign(params);
  ExperimentConfig resolved;
  resolved.set("kind", "verify-collapse");
  resolved.set("n", join_ints(params.n_list));
  resolved.set("seeds", std::to_string(params.seeds_per_n));
  resolved.set("k", join_ints(params.k_list));
  resolved.set("orderings", std::to_string(params.random_orderings));
  json report = report_skeleton("verify-collapse", global, resolved);
  report["graphs"] = result.graphs;
  report["instances"] = result.instances;
  report["violations"] = result.violations;
  report["min_ratio"] = result.min_ratio;
  emit_output(global, render_report(report, global.format));
  return result.violations == 0 ? 0 : 1;
}

int run_verify_majorization(const GlobalArgs& global, const MajorizationCampaignParams& params) {
  const MajorizationCampaignResult result = verify_majorization_campaign(params);
  ExperimentConfig resolved;
  resolved.set("kind", "verify-majorization");
  resolved.set("n", join_ints(params.n_list));
  resolved.set("seeds", std::to_string(params.seeds_per_n));
  resolved.set("d", format_double(params.d));
  resolved.set("t-points", std::to_string(params.t_points));
  resolved.set("t-max", format_double(params.t_max));
  json report = report_skeleton("verify-majorization", global, resolved);
  report["graphs"] = result.graphs;
  report["eligible_graphs"] = result.eligible_graphs;
  report["instances"] = result.instances;
  report["violations"] = result.violations;
  report["max_excess"] = result.max_excess;
  json records = json::array();
  for (const auto& inst : result.records) {
    json row;
    row["n"] = inst.n;
    row["graph_index"] = inst.graph_index;
    row["k"] = inst.k;
    row["lambda2"] = inst.lambda2;
    row["gamma_cert"] = inst.gamma_cert;
    row["kappa_d"] = inst.kappa_d;
    row["max_excess"] = inst.max_excess;
    row["escaped_mass"] = inst.escaped_mass;
    row["chain_target"] = inst.chain_target;
    row["chain_ratio"] = inst.chain_ratio;
    records.push_back(row);
  }
  report["records"] = records;
  emit_output(global, render_report(report, global.format));
  return result.violations == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

struct PathsArgs {
  std::string graph_path;
  int random_n = 0;
  std::string color = "red";
  double gamma = 0.5;
  std::uint64_t walks_per_source = 0;
  int walk_degree = 0;
  bool lazy = false;
  bool check_hits = false;
};

int run_paths(const GlobalArgs& global, const PathsArgs& args) {
  const PointerConfig config = load_or_random_config(args.graph_path, args.random_n, global.seed);
  const PhaseGraph graph = build_phase_graph(config, parse_color(args.color));
  PathOptions options;
  options.gamma = args.gamma;
  options.walks_per_source = args.walks_per_source;
  options.walk_degree = args.walk_degree;
  options.lazy = args.lazy;
  const PathSystem system = build_path_system(graph, options, global.seed);

  ExperimentConfig resolved;
  resolved.set("kind", "paths");
  resolved.set("n", std::to_string(config.n));
  resolved.set("gamma", format_double(args.gamma));
  resolved.set("walks-per-source", std::to_string(system.walks_per_source));
  resolved.set("lazy", args.lazy ? "1" : "0");
  json report = report_skeleton("paths", global, resolved);
  report["coverage"] = system.coverage;
  report["K"] = system.congestion;
  report["max_node_visits"] = system.max_node_visits;
  report["delta_path"] = system.path_length;
  report["mixing_budget_T"] = mixing_budget(system.n, system.path_length, system.congestion);
  const double n = system.n;
  report["visit_threshold"] = 9.0 * n * std::log(n) * system.path_length;
  if (args.check_hits) {
    const HitProbReport hits = hit_probability_check(graph, system.path_length, args.lazy);
    json h;
    h["lambda_star_abs"] = hits.lambda_star_abs;
    h["walk_gap"] = hits.walk_gap;
    h["premise_holds"] = hits.premise_holds;
    h["min_hit"] = hits.min_hit;
    h["floor"] = 1.0 / (2.0 * n);
    h["floor_holds"] = hits.floor_holds;
    report["hit_check"] = h;
  }
  emit_output(global, render_report(report, global.format));
  return 0;
}

// ---------------------------------------------------------------------------
// bootstrap
// ---------------------------------------------------------------------------

int run_bootstrap_cmd(const GlobalArgs& global, BootstrapParams params) {
  params.seed = global.seed;
  const BootstrapReport result = run_bootstrap(params);

  ExperimentConfig resolved;
  resolved.set("kind", "bootstrap");
  resolved.set("n", std::to_string(params.n));
  resolved.set("gamma", format_double(params.gamma));
  resolved.set("phases", std::to_string(params.resolved_phases()));
  resolved.set("phase-length", format_double(result.phase_length));
  resolved.set("profile-budget", std::to_string(params.profile_budget));
  json report = report_skeleton("bootstrap", global, resolved);
  report["exact_mode"] = result.exact_mode;
  json phases = json::array();
  for (const auto& rec : result.phases) {
    json row;
    row["phase"] = rec.phase;
    row["moved"] = color_name(rec.moved);
    row["d_f"] = rec.d_f;
    row["hypothesis_checked"] = rec.hypothesis_checked;
    if (rec.hypothesis_checked) {
      row["hypothesis_holds"] = rec.hypothesis_holds;
      row["first_violation_k"] = rec.first_violation_k;
    }
    row["max_modifications"] = rec.max_modifications;
    row["mean_modifications"] = rec.mean_modifications;
    phases.push_back(row);
  }
  report["phases"] = phases;
  if (result.final_profile) {
    json profile;
    json card = json::array();
    json ratio = json::array();
    for (int k = 1; k <= result.final_profile->kmax; ++k) {
      card.push_back(result.final_profile->phi_card[k]);
      ratio.push_back(result.final_profile->phi_ratio[k]);
    }
    profile["kmax"] = result.final_profile->kmax;
    profile["phi_card"] = card;
    profile["phi_ratio"] = ratio;
    report["final_profile"] = profile;
  }
  report["tau"] = result.tau;
  report["max_total_modifications"] = result.max_total_modifications;
  report["mean_total_modifications"] = result.mean_total_modifications;
  report["modification_budget"] = result.modification_budget;
  report["budget_tail_bound"] = result.budget_tail_bound;
  report["final_config"] = config_to_text(result.final_config);
  emit_output(global, render_report(report, global.format));
  return 0;
}

// ---------------------------------------------------------------------------
// uniformity / duality / meancut
// ---------------------------------------------------------------------------

struct UniformityArgs {
  int n = 3;
  double phase_length = 100.0;
  std::uint64_t replicas = 100000;
};

int run_uniformity(const GlobalArgs& global, const UniformityArgs& args) {
  const UniformityReport result =
      uniformity_test(args.n, args.phase_length, args.replicas, global.seed);
  ExperimentConfig resolved;
  resolved.set("kind", "uniformity");
  resolved.set("n", std::to_string(args.n));
  resolved.set("phase-length", format_double(args.phase_length));
  resolved.set("replicas", std::to_string(args.replicas));
  json report = report_skeleton("uniformity", global, resolved);
  report["statistic"] = result.chi.statistic;
  report["dof"] = result.chi.dof;
  report["p_value"] = result.chi.p_value;
  report["ok"] = result.chi.ok;
  emit_output(global, render_report(report, global.format));
  return result.chi.ok ? 0 : 1;
}

struct SetTestArgs {
  int n = 8;
  int set_size = 1;
  std::vector<int> members;  // 1-based override
  double phase_length = 2.0;
  std::uint64_t replicas = 100000;
  std::string graph_path;
  double gamma = 0.25;  // meancut only
  double d = 2.0;       // meancut only
};

std::vector<int> resolve_members(const SetTestArgs& args, int n) {
  std::vector<int> members;
  if (!args.members.empty()) {
    for (int v : args.members) members.push_back(v - 1);
  } else {
    if (args.set_size < 1 || args.set_size >= n) {
      throw std::invalid_argument("set size must be in [1, n-1]");
    }
    for (int v = 0; v < args.set_size; ++v) members.push_back(v);
  }
  return members;
}

int run_duality(const GlobalArgs& global, const SetTestArgs& args) {
  const PointerConfig config = args.graph_path.empty()
                                   ? make_canonical_config(args.n)
                                   : config_from_text(read_text_file(args.graph_path));
  const std::vector<int> members = resolve_members(args, config.n);
  const DualityReport result = exclusion_duality_test(config, members, args.phase_length,
                                                      args.replicas, global.seed);
  ExperimentConfig resolved;
  resolved.set("kind", "duality");
  resolved.set("n", std::to_string(config.n));
  resolved.set("set-size", std::to_string(members.size()));
  resolved.set("phase-length", format_double(args.phase_length));
  resolved.set("replicas", std::to_string(args.replicas));
  json report = report_skeleton("duality", global, resolved);
  report["max_abs_deviation"] = result.max_abs_deviation;
  report["max_sigma_ratio"] = result.max_sigma_ratio;
  report["empirical"] = result.empirical;
  report["analytic"] = result.analytic;
  report["ok"] = result.ok;
  emit_output(global, render_report(report, global.format));
  return result.ok ? 0 : 1;
}

int run_meancut(const GlobalArgs& global, const SetTestArgs& args) {
  const PointerConfig config = args.graph_path.empty()
                                   ? make_canonical_config(args.n)
                                   : config_from_text(read_text_file(args.graph_path));
  const std::vector<int> members = resolve_members(args, config.n);
  const MeanCutReport result = mean_cut_test(config, members, args.phase_length, args.replicas,
                                             args.gamma, args.d, global.seed);
  ExperimentConfig resolved;
  resolved.set("kind", "meancut");
  resolved.set("n", std::to_string(config.n));
  resolved.set("set-size", std::to_string(members.size()));
  resolved.set("phase-length", format_double(args.phase_length));
  resolved.set("replicas", std::to_string(args.replicas));
  resolved.set("gamma", format_double(args.gamma));
  resolved.set("d", format_double(args.d));
  json report = report_skeleton("meancut", global, resolved);
  report["mean_floor"] = result.mean_floor;
  report["empirical_mean"] = result.empirical_mean;
  report["ratio"] = result.ratio;
  report["stationary_mean"] = result.stationary_mean;
  json tails = json::array();
  for (const auto& tail : result.tails) {
    json row;
    row["r"] = tail.r;
    row["threshold"] = tail.threshold;
    row["frequency"] = tail.frequency;
    row["bound"] = tail.bound;
    row["ok"] = tail.ok;
    tails.push_back(row);
  }
  report["tails"] = tails;
  report["ok"] = result.ok;
  emit_output(global, render_report(report, global.format));
  return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalArgs global;
  int exit_code = 0;

  CLI::App app{"local rewiring protocol simulator and verification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", global.config_path, "key = value defaults file");
  app.add_option("--seed", global.seed, "base RNG seed");
  app.add_option("--out", global.out, "output path ('-' = stdout; simulate: directory)");
  app.add_option("--format", global.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", global.threads, "worker threads (0 = library default)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run the alternating-phase protocol");
  sim_cmd->add_option("--n", sim.n, "node count");
  sim_cmd->add_option("--phases", sim.phases, "number of phases");
  sim_cmd->add_option("--phase-length", sim.phase_length, "phase duration T");
  sim_cmd->add_option("--a-exponent", sim.a_exponent, "derive T = ln(n)^a");
  sim_cmd->add_option("--replicas", sim.replicas, "independent runs");
  sim_cmd->add_flag("--snapshot-profile", sim.snapshot_profile,
                    "record exact profiles after each phase (replica 0)");
  sim_cmd->add_option("--initial", sim.initial_path, "initial config file");
  sim_cmd->add_option("--counting", sim.counting, "M_n rule: both | owner")
      ->check(CLI::IsMember({"both", "owner"}));

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "exact isoperimetric profile");
  prof_cmd->add_option("--graph", prof.graph_path, "pointer config file");
  prof_cmd->add_option("--random-n", prof.random_n, "random config on n nodes instead");
  prof_cmd->add_option("--color", prof.color, "pointer color kept in the graph");
  prof_cmd->add_option("--kmax", prof.kmax, "profile cutoff (default n/2)");
  prof_cmd->add_option("--variant", prof.variant, "card | ratio | both");
  prof_cmd->add_flag("--witnesses", prof.witnesses, "include minimizing sets");

  SpreadCampaignParams spread;
  auto* spread_cmd = app.add_subcommand("verify-spread", "partial-spread inequality campaign");
  spread_cmd->add_option("--n", spread.n_list, "graph sizes");
  spread_cmd->add_option("--seeds", spread.seeds_per_n, "graphs per size");
  spread_cmd->add_option("--k", spread.k_list, "set-size bounds");
  spread_cmd->add_option("--t", spread.t_grid, "time grid");

  CollapseCampaignParams collapse_params;
  auto* collapse_cmd = app.add_subcommand("verify-collapse", "collapsed-gap campaign");
  collapse_cmd->add_option("--n", collapse_params.n_list, "graph sizes");
  collapse_cmd->add_option("--seeds", collapse_params.seeds_per_n, "graphs per size");
  collapse_cmd->add_option("--k", collapse_params.k_list, "kept-node counts");
  collapse_cmd->add_option("--orderings", collapse_params.random_orderings,
                           "random orderings per (graph, k)");

  MajorizationCampaignParams major;
  auto* major_cmd = app.add_subcommand("verify-majorization", "lattice-walk dominance campaign");
  major_cmd->add_option("--n", major.n_list, "graph sizes");
  major_cmd->add_option("--seeds", major.seeds_per_n, "graphs per size");
  major_cmd->add_option("--d", major.d, "jump scale");
  major_cmd->add_option("--t-points", major.t_points, "grid size");
  major_cmd->add_option("--t-max", major.t_max, "largest time");

  PathsArgs paths_args;
  auto* paths_cmd = app.add_subcommand("paths", "randomized canonical-path system");
  paths_cmd->add_option("--graph", paths_args.graph_path, "pointer config file");
  paths_cmd->add_option("--random-n", paths_args.random_n, "random config on n nodes instead");
  paths_cmd->add_option("--color", paths_args.color, "pointer color kept in the graph");
  paths_cmd->add_option("--gamma", paths_args.gamma, "expansion parameter");
  paths_cmd->add_option("--walks-per-source", paths_args.walks_per_source,
                        "walks per source (0 = ceil(5 n ln n))");
  paths_cmd->add_option("--d", paths_args.walk_degree, "degree in the length formula");
  paths_cmd->add_flag("--lazy", paths_args.lazy, "hold with probability 1/2 each step");
  paths_cmd->add_flag("--check-hits", paths_args.check_hits,
                      "exact endpoint-hit probabilities via matrix powers");

  BootstrapParams boot;
  boot.gamma = 0.25;
  boot.phase_length = 5.0;
  auto* boot_cmd = app.add_subcommand("bootstrap", "doubling-d_f pipeline");
  boot_cmd->add_option("--n", boot.n, "node count");
  boot_cmd->add_option("--gamma", boot.gamma, "expansion parameter");
  boot_cmd->add_option("--phases", boot.num_phases, "phases (0 = ceil(log2 n))");
  double boot_a = 0.0;
  boot_cmd->add_option("--phase-length", boot.phase_length, "phase duration T");
  boot_cmd->add_option("--a-exponent", boot_a, "derive T = ln(n)^a");
  boot_cmd->add_option("--profile-budget", boot.profile_budget,
                       "largest n profiled exactly each phase");

  UniformityArgs uni;
  auto* uni_cmd = app.add_subcommand("uniformity", "chi-square stationarity test");
  uni_cmd->add_option("--n", uni.n, "node count (3..5)");
  uni_cmd->add_option("--phase-length", uni.phase_length, "phase duration T");
  uni_cmd->add_option("--replicas", uni.replicas, "independent phases");

  SetTestArgs dual;
  auto* dual_cmd = app.add_subcommand("duality", "occupancy vs heat kernel");
  dual_cmd->add_option("--n", dual.n, "node count (canonical config)");
  dual_cmd->add_option("--graph", dual.graph_path, "pointer config file instead");
  dual_cmd->add_option("--set-size", dual.set_size, "track pointers of nodes 1..s");
  dual_cmd->add_option("--members", dual.members, "explicit 1-based node list");
  dual_cmd->add_option("--phase-length", dual.phase_length, "phase duration T");
  dual_cmd->add_option("--replicas", dual.replicas, "independent phases");

  SetTestArgs cut;
  cut.n = 16;
  cut.set_size = 4;
  cut.phase_length = 8.0;
  auto* cut_cmd = app.add_subcommand("meancut", "outgoing-cut mean and lower tail");
  cut_cmd->add_option("--n", cut.n, "node count (canonical config)");
  cut_cmd->add_option("--graph", cut.graph_path, "pointer config file instead");
  cut_cmd->add_option("--set-size", cut.set_size, "cut set = nodes 1..s");
  cut_cmd->add_option("--members", cut.members, "explicit 1-based node list");
  cut_cmd->add_option("--phase-length", cut.phase_length, "phase duration T");
  cut_cmd->add_option("--replicas", cut.replicas, "independent phases");
  cut_cmd->add_option("--gamma", cut.gamma, "expansion parameter");
  cut_cmd->add_option("--d", cut.d, "cut saturation level");

  try {
    app.parse(argc, argv);

    if (!global.config_path.empty()) {
      global.file = ExperimentConfig::parse(read_text_file(global.config_path));
      if (app.count("--seed") == 0) global.seed = global.file.get_u64("seed", global.seed);
      if (app.count("--format") == 0) global.format = global.file.get_or("format", global.format);
      if (app.count("--out") == 0) global.out = global.file.get_or("out", global.out);
      if (app.count("--threads") == 0) {
        global.threads = static_cast<int>(global.file.get_u64("threads", global.threads));
      }
    }
#ifdef _OPENMP
    if (global.threads > 0) omp_set_num_threads(global.threads);
#endif
    const ExperimentConfig& file = global.file;

    if (sim_cmd->parsed()) {
      overlay_int(sim_cmd, file, "--n", "n", sim.n);
      overlay_int(sim_cmd, file, "--phases", "phases", sim.phases);
      overlay_double(sim_cmd, file, "--phase-length", "phase-length", sim.phase_length);
      overlay_double(sim_cmd, file, "--a-exponent", "a-exponent", sim.a_exponent);
      overlay_u64(sim_cmd, file, "--replicas", "replicas", sim.replicas);
      overlay_string(sim_cmd, file, "--initial", "initial", sim.initial_path);
      overlay_string(sim_cmd, file, "--counting", "counting", sim.counting);
      exit_code = run_simulate(global, sim);
    } else if (prof_cmd->parsed()) {
      overlay_string(prof_cmd, file, "--graph", "graph", prof.graph_path);
      overlay_int(prof_cmd, file, "--random-n", "random-n", prof.random_n);
      overlay_string(prof_cmd, file, "--color", "color", prof.color);
      overlay_int(prof_cmd, file, "--kmax", "kmax", prof.kmax);
      overlay_string(prof_cmd, file, "--variant", "variant", prof.variant);
      exit_code = run_profile(global, prof);
    } else if (spread_cmd->parsed()) {
      overlay_int_list(spread_cmd, file, "--n", "n", spread.n_list);
      overlay_int(spread_cmd, file, "--seeds", "seeds", spread.seeds_per_n);
      overlay_int_list(spread_cmd, file, "--k", "k", spread.k_list);
      overlay_double_list(spread_cmd, file, "--t", "t", spread.t_grid);
      spread.seed = global.seed;
      exit_code = run_verify_spread(global, spread);
    } else if (collapse_cmd->parsed()) {
      overlay_int_list(collapse_cmd, file, "--n", "n", collapse_params.n_list);
      overlay_int(collapse_cmd, file, "--seeds", "seeds", collapse_params.seeds_per_n);
      overlay_int_list(collapse_cmd, file, "--k", "k", collapse_params.k_list);
      overlay_int(collapse_cmd, file, "--orderings", "orderings",
                  collapse_params.random_orderings);
      collapse_params.seed = global.seed;
      exit_code = run_verify_collapse(global, collapse_params);
    } else if (major_cmd->parsed()) {
      overlay_int_list(major_cmd, file, "--n", "n", major.n_list);
      overlay_int(major_cmd, file, "--seeds", "seeds", major.seeds_per_n);
      overlay_double(major_cmd, file, "--d", "d", major.d);
      overlay_int(major_cmd, file, "--t-points", "t-points", major.t_points);
      overlay_double(major_cmd, file, "--t-max", "t-max", major.t_max);
      major.seed = global.seed;
      exit_code = run_verify_majorization(global, major);
    } else if (paths_cmd->parsed()) {
      overlay_string(paths_cmd, file, "--graph", "graph", paths_args.graph_path);
      overlay_int(paths_cmd, file, "--random-n", "random-n", paths_args.random_n);
      overlay_string(paths_cmd, file, "--color", "color", paths_args.color);
      overlay_double(paths_cmd, file, "--gamma", "gamma", paths_args.gamma);
      overlay_u64(paths_cmd, file, "--walks-per-source", "walks-per-source",
                  paths_args.walks_per_source);
      overlay_int(paths_cmd, file, "--d", "d", paths_args.walk_degree);
      exit_code = run_paths(global, paths_args);
    } else if (boot_cmd->parsed()) {
      overlay_int(boot_cmd, file, "--n", "n", boot.n);
      overlay_double(boot_cmd, file, "--gamma", "gamma", boot.gamma);
      overlay_int(boot_cmd, file, "--phases", "phases", boot.num_phases);
      overlay_double(boot_cmd, file, "--phase-length", "phase-length", boot.phase_length);
      overlay_double(boot_cmd, file, "--a-exponent", "a-exponent", boot_a);
      overlay_int(boot_cmd, file, "--profile-budget", "profile-budget", boot.profile_budget);
      if (boot_a > 0.0) boot.a_exponent = boot_a;
      exit_code = run_bootstrap_cmd(global, boot);
    } else if (uni_cmd->parsed()) {
      overlay_int(uni_cmd, file, "--n", "n", uni.n);
      overlay_double(uni_cmd, file, "--phase-length", "phase-length", uni.phase_length);
      overlay_u64(uni_cmd, file, "--replicas", "replicas", uni.replicas);
      exit_code = run_uniformity(global, uni);
    } else if (dual_cmd->parsed()) {
      overlay_int(dual_cmd, file, "--n", "n", dual.n);
      overlay_string(dual_cmd, file, "--graph", "graph", dual.graph_path);
      overlay_int(dual_cmd, file, "--set-size", "set-size", dual.set_size);
      overlay_double(dual_cmd, file, "--phase-length", "phase-length", dual.phase_length);
      overlay_u64(dual_cmd, file, "--replicas", "replicas", dual.replicas);
      exit_code = run_duality(global, dual);
    } else if (cut_cmd->parsed()) {
      overlay_int(cut_cmd, file, "--n", "n", cut.n);
      overlay_string(cut_cmd, file, "--graph", "graph", cut.graph_path);
      overlay_int(cut_cmd, file, "--set-size", "set-size", cut.set_size);
      overlay_double(cut_cmd, file, "--phase-length", "phase-length", cut.phase_length);
      overlay_u64(cut_cmd, file, "--replicas", "replicas", cut.replicas);
      overlay_double(cut_cmd, file, "--gamma", "gamma", cut.gamma);
      overlay_double(cut_cmd, file, "--d", "d", cut.d);
      exit_code = run_meancut(global, cut);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
