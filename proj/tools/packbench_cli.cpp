// Command-line front end: params, count-copies, pack, bootstrap, adversary, sweep.
//
// Every subcommand accepts --config FILE with a JSON object whose keys are the
// long flag names with '-' replaced by '_'. Flags given on the command line
// override the file. Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "packbench/adversary.hpp"
#include "packbench/bootstrap.hpp"
#include "packbench/enumerate.hpp"
#include "packbench/experiments.hpp"
#include "packbench/packing.hpp"
#include "packbench/pattern.hpp"

namespace pb = packbench;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr const char* kOutputDirEnv = "PACKBENCH_OUTPUT_DIR";

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw pb::IoError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw pb::ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

template <typename T>
struct is_optional : std::false_type {};
template <typename T>
struct is_optional<std::optional<T>> : std::true_type {};

// Copies config-file values into options the user did not pass as flags.
class Overlay {
 public:
  Overlay(CLI::App* cmd, json j) : cmd_(cmd), j_(std::move(j)) {
    if (!j_.is_object()) throw pb::ConfigError("config file must hold a JSON object");
  }

  template <typename T>
  void apply(const std::string& key, T& target) {
    std::string flag = "--" + key;
    for (char& ch : flag)
      if (ch == '_') ch = '-';
    used_.push_back(key);
    if (!j_.contains(key) || cmd_->get_option(flag)->count() > 0) return;
    try {
      const auto& value = j_.at(key);
      if constexpr (is_optional<T>::value) {
        target = value.is_null() ? T{} : T(value.template get<typename T::value_type>());
      } else {
        target = value.template get<T>();
      }
    } catch (const json::exception& e) {
      throw pb::ConfigError("bad value for '" + key + "': " + e.what());
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw pb::ConfigError("unknown config key '" + key + "'");
  }

 private:
  CLI::App* cmd_;
  json j_;
  std::vector<std::string> used_;
};

json rational_json(const pb::Rational& r) { return {{"exact", pb::to_string(r)}, {"value", pb::to_double(r)}}; }

pb::Graph host_or_sample(const std::string& host, std::size_t n, double p, std::uint64_t seed) {
  if (!host.empty()) return pb::read_edge_list_file(host);
  if (n == 0) throw pb::ConfigError("give --host or --n");
  if (!(p > 0.0 && p <= 1.0)) throw pb::ConfigError("--p must lie in (0,1]");
  return pb::gnp_generate({n, p, seed});
}

struct Common {
  std::string config;
  std::string pattern = "K3";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"packbench: H-packing and adversarial deletion workbench for G(n,p)"};
  app.require_subcommand(1);

  // params
  Common params_opts;
  auto* params_cmd = app.add_subcommand("params", "print the pattern parameters as JSON");
  params_cmd->add_option("--config", params_opts.config, "JSON config file");
  params_cmd->add_option("--pattern", params_opts.pattern, "preset (K3..K10, C3..C10) or edge-list path");

  // count-copies
  Common count_opts;
  std::string count_host;
  std::optional<std::uint32_t> count_through;
  std::optional<std::size_t> count_limit;
  auto* count_cmd = app.add_subcommand("count-copies", "count copies of H in a host graph");
  count_cmd->add_option("--config", count_opts.config, "JSON config file");
  count_cmd->add_option("--pattern", count_opts.pattern, "preset or edge-list path");
  count_cmd->add_option("--host", count_host, "host edge-list path");
  count_cmd->add_option("--through", count_through, "only copies containing this vertex");
  count_cmd->add_option("--limit", count_limit, "stop after this many copies");

  // pack
  Common pack_opts;
  std::string pack_host, pack_out;
  pb::OracleConfig pack_oracle;
  auto* pack_cmd = app.add_subcommand("pack", "greedy + local-search packing of a host graph");
  pack_cmd->add_option("--config", pack_opts.config, "JSON config file");
  pack_cmd->add_option("--pattern", pack_opts.pattern, "preset or edge-list path");
  pack_cmd->add_option("--host", pack_host, "host edge-list path");
  pack_cmd->add_option("--seed", pack_oracle.seed, "oracle seed");
  pack_cmd->add_option("--sweeps", pack_oracle.sweeps, "greedy restarts");
  pack_cmd->add_option("--swap-budget", pack_oracle.swap_budget, "local-search step limit");
  pack_cmd->add_option("--threads", pack_oracle.threads, "worker threads for restarts");
  pack_cmd->add_option("--out", pack_out, "write the copies, one per line, to this file");

  // bootstrap
  Common boot_opts;
  std::string boot_host, boot_policy = "best_effort";
  std::size_t boot_n = 0;
  double boot_p = 0.0;
  std::uint64_t boot_seed = 0;
  pb::BootstrapConfig boot_cfg;
  auto* boot_cmd = app.add_subcommand("bootstrap", "geometric-partition bootstrap packing");
  boot_cmd->add_option("--config", boot_opts.config, "JSON config file");
  boot_cmd->add_option("--pattern", boot_opts.pattern, "preset or edge-list path");
  boot_cmd->add_option("--host", boot_host, "host edge-list path (otherwise G(n,p) is sampled)");
  boot_cmd->add_option("--n", boot_n, "vertex count of the sampled host");
  boot_cmd->add_option("--p", boot_p, "edge probability");
  boot_cmd->add_option("--seed", boot_seed, "seed for host, partition and oracle");
  boot_cmd->add_option("--gamma", boot_cfg.gamma, "margin gamma in (0,1)");
  boot_cmd->add_option("--C", boot_cfg.C, "calibration constant C");
  boot_cmd->add_option("--max-resamples", boot_cfg.max_resamples, "partition retry cap");
  boot_cmd->add_option("--policy", boot_policy, "partition policy: strict or best_effort");
  boot_cmd->add_option("--sweeps", boot_cfg.oracle.sweeps, "oracle greedy restarts");
  boot_cmd->add_option("--swap-budget", boot_cfg.oracle.swap_budget, "oracle local-search step limit");

  // adversary
  Common adv_opts;
  std::string adv_host;
  std::size_t adv_n = 0;
  double adv_p = 0.0;
  std::uint64_t adv_seed = 0;
  pb::AdversaryConfig adv_cfg;
  auto* adv_cmd = app.add_subcommand("adversary", "delete edges so a random set X meets no copy of H");
  adv_cmd->add_option("--config", adv_opts.config, "JSON config file");
  adv_cmd->add_option("--pattern", adv_opts.pattern, "preset or edge-list path");
  adv_cmd->add_option("--host", adv_host, "host edge-list path (otherwise G(n,p) is sampled)");
  adv_cmd->add_option("--n", adv_n, "vertex count of the sampled host");
  adv_cmd->add_option("--p", adv_p, "edge probability");
  adv_cmd->add_option("--seed", adv_seed, "seed for host and X");
  adv_cmd->add_option("--epsilon", adv_cfg.epsilon, "degree-loss margin in (0,1)");
  adv_cmd->add_option("--c", adv_cfg.c, "construction constant (default from epsilon and H)");
  adv_cmd->add_option("--x-size", adv_cfg.x_override, "explicit |X|");

  // sweep
  std::string sweep_config;
  pb::ExperimentConfig sweep_cfg;
  std::string sweep_mode;
  std::vector<double> sweep_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep and write trials.csv and summary.json");
  sweep_cmd->add_option("--config", sweep_config, "JSON experiment config");
  sweep_cmd->add_option("--pattern", sweep_cfg.pattern, "preset or edge-list path");
  sweep_cmd->add_option("--n", sweep_cfg.n_values, "host sizes");
  sweep_cmd->add_option("--p", sweep_cfg.p_values, "edge probabilities");
  sweep_cmd->add_option("--p-grid", sweep_grid, "geometric grid: p_min p_max points")->expected(3);
  sweep_cmd->add_option("--gamma", sweep_cfg.gamma, "margin gamma");
  sweep_cmd->add_option("--C", sweep_cfg.C, "calibration constant C");
  sweep_cmd->add_option("--epsilon", sweep_cfg.epsilon, "adversary degree-loss margin");
  sweep_cmd->add_option("--c", sweep_cfg.c, "adversary construction constant");
  sweep_cmd->add_option("--trials", sweep_cfg.trials_per_cell, "trials per cell");
  sweep_cmd->add_option("--seed", sweep_cfg.base_seed, "base seed");
  sweep_cmd->add_option("--mode", sweep_mode, "bootstrap, baseline, adversary or both-packers");
  sweep_cmd->add_option("--output", sweep_cfg.output, std::string("output directory (default $") + kOutputDirEnv + " or ./results)");
  sweep_cmd->add_option("--sweeps", sweep_cfg.sweeps, "oracle greedy restarts");
  sweep_cmd->add_option("--swap-budget", sweep_cfg.swap_budget, "oracle local-search step limit");
  sweep_cmd->add_option("--max-resamples", sweep_cfg.max_resamples, "partition retry cap");
  sweep_cmd->add_option("--x-size", sweep_cfg.x_override, "explicit |X| in adversary mode");
  sweep_cmd->add_option("--threads", sweep_cfg.threads, "parallel trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (params_cmd->parsed()) {
      Overlay o(params_cmd, load_config_file(params_opts.config));
      o.apply("pattern", params_opts.pattern);
      o.reject_unknown();
      const auto h = pb::load_pattern(params_opts.pattern);
      const auto params = pb::pattern_params(h);
      const json out = {{"pattern", h.name()},
                        {"vertices", h.vertex_count()},
                        {"edges", h.edge_count()},
                        {"m2", rational_json(params.m2)},
                        {"chi", params.chi},
                        {"sigma", params.sigma},
                        {"chi_cr", rational_json(params.chi_cr)},
                        {"degree_coefficient", rational_json(params.degree_coefficient())}};
      std::cout << out.dump(2) << "\n";
    } else if (count_cmd->parsed()) {
      Overlay o(count_cmd, load_config_file(count_opts.config));
      o.apply("pattern", count_opts.pattern);
      o.apply("host", count_host);
      o.apply("through", count_through);
      o.apply("limit", count_limit);
      o.reject_unknown();
      if (count_host.empty()) throw pb::ConfigError("--host is required");
      const auto h = pb::load_pattern(count_opts.pattern);
      const auto g = pb::read_edge_list_file(count_host);
      json out;
      if (count_through) {
        if (*count_through >= g.vertex_count()) throw pb::ConfigError("--through is not a host vertex");
        out = {{"copies", pb::copies_through(g, h, *count_through).size()}, {"through", *count_through}};
      } else {
        const auto list = pb::enumerate_copies(g, h, count_limit);
        out = {{"copies", list.copies.size()}, {"truncated", list.truncated}};
      }
      std::cout << out.dump(2) << "\n";
    } else if (pack_cmd->parsed()) {
      Overlay o(pack_cmd, load_config_file(pack_opts.config));
      o.apply("pattern", pack_opts.pattern);
      o.apply("host", pack_host);
      o.apply("seed", pack_oracle.seed);
      o.apply("sweeps", pack_oracle.sweeps);
      o.apply("swap_budget", pack_oracle.swap_budget);
      o.apply("threads", pack_oracle.threads);
      o.apply("out", pack_out);
      o.reject_unknown();
      if (pack_host.empty()) throw pb::ConfigError("--host is required");
      pb::validate(pack_oracle);
      const auto h = pb::load_pattern(pack_opts.pattern);
      const auto g = pb::read_edge_list_file(pack_host);
      const auto pk = pb::HeuristicOracle{}(g, h, pack_oracle);
      const auto verdict = pb::verify_packing(g, h, pk);
      if (!pack_out.empty()) {
        std::ofstream out(pack_out);
        if (!out) throw pb::IoError("cannot open " + pack_out + " for writing");
        for (const auto& c : pk.copies) {
          const auto w = c.witness();
          for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << w[i];
          out << "\n";
        }
        if (!out) throw pb::IoError("write failed for " + pack_out);
      }
      std::cout << json{{"copies", pk.copies.size()}, {"leftover", pb::leftover_count(pk)}, {"verified", verdict.accepted}}.dump(2)
                << "\n";
    } else if (boot_cmd->parsed()) {
      Overlay o(boot_cmd, load_config_file(boot_opts.config));
      o.apply("pattern", boot_opts.pattern);
      o.apply("host", boot_host);
      o.apply("n", boot_n);
      o.apply("p", boot_p);
      o.apply("seed", boot_seed);
      o.apply("gamma", boot_cfg.gamma);
      o.apply("C", boot_cfg.C);
      o.apply("max_resamples", boot_cfg.max_resamples);
      o.apply("policy", boot_policy);
      o.apply("sweeps", boot_cfg.oracle.sweeps);
      o.apply("swap_budget", boot_cfg.oracle.swap_budget);
      o.reject_unknown();
      if (boot_policy == "strict") boot_cfg.partition_policy = pb::BootstrapConfig::PartitionPolicy::strict;
      else if (boot_policy != "best_effort") throw pb::ConfigError("--policy must be strict or best_effort");
      if (!(boot_p > 0.0 && boot_p <= 1.0)) throw pb::ConfigError("--p must lie in (0,1]");
      try {
        pb::validate(boot_cfg);
      } catch (const std::invalid_argument& e) {
        throw pb::ConfigError(e.what());
      }
      const auto h = pb::load_pattern(boot_opts.pattern);
      const auto g = host_or_sample(boot_host, boot_n, boot_p, boot_seed);
      boot_cfg.seed = pb::derive_seed(boot_seed, 2);
      boot_cfg.oracle.seed = pb::derive_seed(boot_seed, 1);
      const auto result = pb::bootstrap_pack(g, h, boot_p, boot_cfg);
      json stages = json::array();
      for (const auto& s : result.stages)
        stages.push_back({{"stage", s.stage},
                          {"part_size", s.part_size},
                          {"carried_leftover", s.carried_leftover},
                          {"pool_size", s.pool_size},
                          {"copies_added", s.copies_added},
                          {"stage_leftover", s.stage_leftover},
                          {"degree_margin", s.degree_margin},
                          {"required_margin", s.required_margin},
                          {"stage_budget", s.stage_budget},
                          {"carry_ok", s.carry_ok},
                          {"oracle_shortfall", s.oracle_shortfall}});
      const auto m2 = pb::density_m2(h);
      const auto regime = pb::regime_check(g.vertex_count(), boot_p, m2, boot_cfg.C);
      const json out = {{"n", g.vertex_count()},
                        {"p", boot_p},
                        {"pattern", h.name()},
                        {"q", result.plan.q},
                        {"threshold", result.plan.threshold},
                        {"part_sizes", result.plan.sizes},
                        {"precondition_met", result.precondition_met},
                        {"partition_attempts", result.partition_attempts},
                        {"partition_violations", result.partition_violations},
                        {"last_part_oversized", result.last_part_oversized},
                        {"regime", {{"position", pb::to_string(regime.regime)}, {"lower", regime.lower}, {"upper", regime.upper}}},
                        {"theorem_bound", pb::theorem_bound(boot_p, m2, boot_cfg.gamma, boot_cfg.C)},
                        {"stages", stages},
                        {"copies", result.packing.copies.size()},
                        {"leftover", pb::leftover_count(result.packing)},
                        {"verified", pb::verify_packing(g, h, result.packing).accepted}};
      std::cout << out.dump(2) << "\n";
    } else if (adv_cmd->parsed()) {
      Overlay o(adv_cmd, load_config_file(adv_opts.config));
      o.apply("pattern", adv_opts.pattern);
      o.apply("host", adv_host);
      o.apply("n", adv_n);
      o.apply("p", adv_p);
      o.apply("seed", adv_seed);
      o.apply("epsilon", adv_cfg.epsilon);
      o.apply("c", adv_cfg.c);
      o.apply("x_size", adv_cfg.x_override);
      o.reject_unknown();
      if (!(adv_p > 0.0 && adv_p <= 1.0)) throw pb::ConfigError("--p must lie in (0,1]");
      try {
        pb::validate(adv_cfg);
      } catch (const std::invalid_argument& e) {
        throw pb::ConfigError(e.what());
      }
      const auto h = pb::load_pattern(adv_opts.pattern);
      const auto g = host_or_sample(adv_host, adv_n, adv_p, adv_seed);
      adv_cfg.seed = pb::derive_seed(adv_seed, 3);
      const auto out = pb::adversary_construct(g, h, adv_p, adv_cfg);
      const auto& kv = out.kimvu;
      json exponents = json::array();
      for (const auto& r : kv.ei_exponents) exponents.push_back(pb::to_string(r));
      const json report = {{"n", g.vertex_count()},
                           {"p", adv_p},
                           {"pattern", h.name()},
                           {"c", out.c},
                           {"x_size", out.x.size()},
                           {"deletions", out.deleted.size()},
                           {"min_degree_before", out.min_degree_before},
                           {"min_degree_after", out.min_degree_after},
                           {"degree_target", (1.0 - adv_cfg.epsilon) * static_cast<double>(g.vertex_count()) * adv_p},
                           {"max_vertex_deletions", out.max_vertex_deletions},
                           {"isolation_accepted", pb::verify_isolation(out, h).accepted},
                           {"kimvu",
                            {{"k", kv.k},
                             {"e0", kv.e0},
                             {"e0_lower", kv.e0_lower},
                             {"ei_exponents", exponents},
                             {"ei_bounds", kv.ei_bounds},
                             {"eprime", kv.eprime},
                             {"ratio", kv.ratio},
                             {"ratio_lower", kv.ratio_lower},
                             {"ratio_threshold", kv.ratio_threshold},
                             {"feasible", kv.feasible},
                             {"ak", kv.ak},
                             {"dk", kv.dk},
                             {"lambda", kv.lambda}}}};
      std::cout << report.dump(2) << "\n";
    } else if (sweep_cmd->parsed()) {
      // Start from the file, then re-apply any flags on top of it.
      pb::ExperimentConfig from_file;
      pb::apply_json(from_file, load_config_file(sweep_config));
      auto given = [&](const char* flag) { return sweep_cmd->get_option(flag)->count() > 0; };
      pb::ExperimentConfig cfg = from_file;
      if (given("--pattern")) cfg.pattern = sweep_cfg.pattern;
      if (given("--n")) cfg.n_values = sweep_cfg.n_values;
      if (given("--p")) {
        cfg.p_values = sweep_cfg.p_values;
        cfg.p_grid.reset();
      }
      if (given("--p-grid")) {
        cfg.p_grid = pb::PGrid{sweep_grid[0], sweep_grid[1], static_cast<std::size_t>(sweep_grid[2])};
        cfg.p_values.clear();
      }
      if (given("--gamma")) cfg.gamma = sweep_cfg.gamma;
      if (given("--C")) cfg.C = sweep_cfg.C;
      if (given("--epsilon")) cfg.epsilon = sweep_cfg.epsilon;
      if (given("--c")) cfg.c = sweep_cfg.c;
      if (given("--trials")) cfg.trials_per_cell = sweep_cfg.trials_per_cell;
      if (given("--seed")) cfg.base_seed = sweep_cfg.base_seed;
      if (given("--mode")) cfg.mode = pb::parse_mode(sweep_mode);
      if (given("--output")) cfg.output = sweep_cfg.output;
      if (given("--sweeps")) cfg.sweeps = sweep_cfg.sweeps;
      if (given("--swap-budget")) cfg.swap_budget = sweep_cfg.swap_budget;
      if (given("--max-resamples")) cfg.max_resamples = sweep_cfg.max_resamples;
      if (given("--x-size")) cfg.x_override = sweep_cfg.x_override;
      if (given("--threads")) cfg.threads = sweep_cfg.threads;
      if (cfg.output.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        cfg.output = env && *env ? env : "results";
      }
      pb::validate(cfg);
      const auto result = pb::run_sweep(cfg);
      const auto files = pb::emit_results(cfg, result, cfg.output);
      std::size_t failures = 0;
      for (const auto& r : result.records) failures += r.status != "ok";
      std::cout << json{{"trials", result.records.size()},
                        {"failures", failures},
                        {"csv", files.csv.string()},
                        {"summary", files.summary.string()}}
                       .dump(2)
                << "\n";
    }
  } catch (const pb::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const pb::EdgeListError& e) {
    std::cerr << "error: malformed edge list: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
