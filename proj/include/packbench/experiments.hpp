#ifndef PACKBENCH_EXPERIMENTS_HPP
#define PACKBENCH_EXPERIMENTS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "packbench/adversary.hpp"
#include "packbench/bootstrap.hpp"
#include "packbench/graph.hpp"
#include "packbench/packing.hpp"
#include "packbench/pattern.hpp"
#include "packbench/random.hpp"

namespace packbench {

inline constexpr int kFormatVersion = 1;

/// Invalid experiment configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure to read or write a results file (CLI exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { bootstrap, baseline, adversary, both_packers };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::bootstrap: return "bootstrap";
    case Mode::baseline: return "baseline";
    case Mode::adversary: return "adversary";
    case Mode::both_packers: return "both-packers";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "bootstrap") return Mode::bootstrap;
  if (s == "baseline") return Mode::baseline;
  if (s == "adversary") return Mode::adversary;
  if (s == "both-packers") return Mode::both_packers;
  throw ConfigError("unknown mode '" + s + "' (expected bootstrap, baseline, adversary or both-packers)");
}

/// Geometric grid of `points` values from p_min to p_max inclusive.
struct PGrid {
  double p_min = 0.0;
  double p_max = 0.0;
  std::size_t points = 0;
};

struct ExperimentConfig {
  /// Preset name (K3..K10, C3..C10) or edge-list path.
  std::string pattern = "K3";
  std::vector<std::size_t> n_values;
  std::vector<double> p_values;
  std::optional<PGrid> p_grid;
  double gamma = 0.3;
  double C = 3.0;
  double epsilon = 0.2;
  std::optional<double> c;
  std::size_t trials_per_cell = 1;
  std::uint64_t base_seed = 0;
  Mode mode = Mode::bootstrap;
  /// Output directory for trials.csv and summary.json.
  std::string output;
  std::size_t sweeps = 4;
  std::size_t swap_budget = 500;
  std::size_t max_resamples = 20;
  std::optional<std::size_t> x_override;
  unsigned threads = 1;
};

inline std::vector<double> resolved_p_values(const ExperimentConfig& cfg) {
  if (!cfg.p_values.empty() || !cfg.p_grid) return cfg.p_values;
  const PGrid& g = *cfg.p_grid;
  std::vector<double> out;
  if (g.points == 1) return {g.p_min};
  const double ratio = std::log(g.p_max / g.p_min) / static_cast<double>(g.points - 1);
  for (std::size_t i = 0; i < g.points; ++i)
    out.push_back(i + 1 == g.points ? g.p_max : g.p_min * std::exp(ratio * static_cast<double>(i)));
  return out;
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw ConfigError("n_values must not be empty");
  for (auto n : cfg.n_values)
    if (n < 1) throw ConfigError("n values must be positive");
  if (!cfg.p_values.empty() && cfg.p_grid) throw ConfigError("give either p_values or p_grid, not both");
  if (cfg.p_grid) {
    const auto& g = *cfg.p_grid;
    if (g.points < 1) throw ConfigError("p_grid.points must be >= 1");
    if (!(g.p_min > 0.0 && g.p_min <= g.p_max && g.p_max <= 1.0)) throw ConfigError("p_grid needs 0 < p_min <= p_max <= 1");
  }
  const auto ps = resolved_p_values(cfg);
  if (ps.empty()) throw ConfigError("p grid must not be empty");
  for (double p : ps)
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p values must lie in (0,1]");
  if (cfg.trials_per_cell < 1) throw ConfigError("trials_per_cell must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw ConfigError("gamma must lie in (0,1)");
  if (!(cfg.C > 0.0)) throw ConfigError("C must be positive");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  if (cfg.c && !(*cfg.c > 0.0)) throw ConfigError("c must be positive");
  if (cfg.sweeps < 1) throw ConfigError("sweeps must be >= 1");
  if (cfg.max_resamples < 1) throw ConfigError("max_resamples must be >= 1");
}

struct Cell {
  std::size_t n = 0;
  double p = 0.0;
};

/// Cells in n-major order.
inline std::vector<Cell> cells(const ExperimentConfig& cfg) {
  std::vector<Cell> out;
  const auto ps = resolved_p_values(cfg);
  for (auto n : cfg.n_values)
    for (double p : ps) out.push_back({n, p});
  return out;
}

/// Per-trial seed: a SplitMix64 chain over (base_seed, n, bits of p, trial).
inline std::uint64_t trial_seed(std::uint64_t base_seed, const Cell& cell, std::size_t trial) {
  return derive_seed(derive_seed(derive_seed(base_seed, cell.n), double_bits(cell.p)), trial);
}

struct TrialRecord {
  std::string mode;
  std::string pattern;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double C = 0.0;
  double epsilon = 0.0;
  double c = 0.0;
  std::string regime;
  double theorem_bound = 0.0;
  std::optional<std::int64_t> leftover;
  std::optional<std::int64_t> copies;
  std::optional<std::int64_t> baseline_leftover;
  std::optional<std::int64_t> stages;
  std::optional<std::int64_t> oracle_shortfalls;
  std::optional<std::int64_t> partition_violations;
  std::optional<bool> precondition_met;
  std::optional<bool> packing_verified;
  std::optional<std::int64_t> x_size;
  std::optional<std::int64_t> deletions;
  std::optional<std::int64_t> min_degree_before;
  std::optional<std::int64_t> min_degree_after;
  std::optional<double> min_degree_ratio;
  std::optional<std::int64_t> max_vertex_deletions;
  std::optional<bool> isolation_accepted;
  std::optional<bool> kimvu_feasible;
  std::string status = "ok";
  std::string reason;
  double wall_ms = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

namespace detail {

inline OracleConfig oracle_config(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t budget_scale = 1) {
  OracleConfig o;
  o.seed = seed;
  o.sweeps = cfg.sweeps;
  o.swap_budget = cfg.swap_budget * budget_scale;
  o.threads = 1;
  return o;
}

// Single-shot packing of the whole host with the bootstrap's total budget:
// same sweeps and seed, q times the swap budget.
inline Packing baseline_pack(const Graph& g, const Pattern& h, const ExperimentConfig& cfg, const Cell& cell,
                             std::uint64_t oracle_seed) {
  std::size_t q = 1;
  try {
    q = plan_partition(cell.n, cell.p, density_m2(h), cfg.C).q;
  } catch (const RegimeViolation&) {
  }
  return HeuristicOracle{}(g, h, oracle_config(cfg, oracle_seed, q));
}

}  // namespace detail

/// One trial. Sub-seeds: host graph = trial seed; oracle = derive(seed, 1);
/// partition = derive(seed, 2); adversary X = derive(seed, 3). Pipeline
/// errors are recorded as status "error" with the message as reason.
inline TrialRecord run_trial(const ExperimentConfig& cfg, const Pattern& h, const Cell& cell, std::size_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  r.mode = to_string(cfg.mode);
  r.pattern = cfg.pattern;
  r.n = cell.n;
  r.p = cell.p;
  r.trial = trial;
  r.seed = trial_seed(cfg.base_seed, cell, trial);
  r.gamma = cfg.gamma;
  r.C = cfg.C;
  r.epsilon = cfg.epsilon;
  r.c = cfg.c ? *cfg.c : default_c(h, cfg.epsilon);
  const Rational m2 = density_m2(h);
  r.regime = to_string(regime_check(cell.n, cell.p, m2, cfg.C).regime);
  r.theorem_bound = theorem_bound(cell.p, m2, cfg.gamma, cfg.C);
  const std::uint64_t oracle_seed = derive_seed(r.seed, 1);
  const std::uint64_t partition_seed = derive_seed(r.seed, 2);
  const std::uint64_t adversary_seed = derive_seed(r.seed, 3);

  try {
    const Graph g = gnp_generate({cell.n, cell.p, r.seed});
    if (cfg.mode == Mode::bootstrap || cfg.mode == Mode::both_packers) {
      BootstrapConfig bc;
      bc.gamma = cfg.gamma;
      bc.C = cfg.C;
      bc.max_resamples = cfg.max_resamples;
      bc.seed = partition_seed;
      bc.oracle = detail::oracle_config(cfg, oracle_seed);
      const auto result = bootstrap_pack(g, h, cell.p, bc);
      r.copies = static_cast<std::int64_t>(result.packing.copies.size());
      r.leftover = static_cast<std::int64_t>(leftover_count(result.packing));
      r.stages = static_cast<std::int64_t>(result.stages.size());
      r.oracle_shortfalls = static_cast<std::int64_t>(
          std::count_if(result.stages.begin(), result.stages.end(), [](const StageTrace& s) { return s.oracle_shortfall; }));
      r.partition_violations = static_cast<std::int64_t>(result.partition_violations);
      r.precondition_met = result.precondition_met;
      r.packing_verified = verify_packing(g, h, result.packing).accepted;
    }
    if (cfg.mode == Mode::baseline || cfg.mode == Mode::both_packers) {
      const auto pk = detail::baseline_pack(g, h, cfg, cell, oracle_seed);
      const auto left = static_cast<std::int64_t>(leftover_count(pk));
      if (cfg.mode == Mode::baseline) {
        r.copies = static_cast<std::int64_t>(pk.copies.size());
        r.leftover = left;
        r.packing_verified = verify_packing(g, h, pk).accepted;
      } else {
        r.baseline_leftover = left;
      }
    }
    if (cfg.mode == Mode::adversary) {
      AdversaryConfig ac;
      ac.epsilon = cfg.epsilon;
      ac.c = r.c;
      ac.seed = adversary_seed;
      ac.x_override = cfg.x_override;
      const auto out = adversary_construct(g, h, cell.p, ac);
      r.x_size = static_cast<std::int64_t>(out.x.size());
      r.deletions = static_cast<std::int64_t>(out.deleted.size());
      r.min_degree_before = static_cast<std::int64_t>(out.min_degree_before);
      r.min_degree_after = static_cast<std::int64_t>(out.min_degree_after);
      r.min_degree_ratio = static_cast<double>(out.min_degree_after) / (static_cast<double>(cell.n) * cell.p);
      r.max_vertex_deletions = static_cast<std::int64_t>(out.max_vertex_deletions);
      r.isolation_accepted = verify_isolation(out, h).accepted;
      r.kimvu_feasible = out.kimvu.feasible;
    }
  } catch (const std::exception& e) {
    r.status = "error";
    r.reason = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, const Cell& cell, std::size_t trial) {
  return run_trial(cfg, load_pattern(cfg.pattern), cell, trial);
}

struct CellSummary {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::optional<double> median_leftover;
  std::optional<double> median_baseline_leftover;
  double theorem_bound = 0.0;
  /// c / (n^(v-3) p^(e-1)) before flooring and capping.
  double adversary_lower_bound = 0.0;
  std::string regime;
};

/// Least-squares fit of ln(median leftover) against ln(1/p) for one n.
struct SlopeFit {
  std::size_t n = 0;
  std::size_t points = 0;
  std::optional<double> slope;
  std::optional<double> intercept;
  /// Root-mean-square residual of the fit.
  std::optional<double> residual;
};

struct Summary {
  std::vector<CellSummary> cells;
  std::vector<SlopeFit> fits;
};

inline std::optional<double> median(std::vector<double> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2.0;
}

inline SlopeFit fit_slope(std::size_t n, const std::vector<std::pair<double, double>>& pts) {
  SlopeFit fit;
  fit.n = n;
  fit.points = pts.size();
  if (pts.size() < 2) return fit;
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) sx += x, sy += y;
  const double k = static_cast<double>(pts.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  if (sxx == 0.0) return fit;
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (auto [x, y] : pts) ss += (y - intercept - slope * x) * (y - intercept - slope * x);
  fit.slope = slope;
  fit.intercept = intercept;
  fit.residual = std::sqrt(ss / k);
  return fit;
}

inline Summary summarize(const ExperimentConfig& cfg, const Pattern& h, const std::vector<TrialRecord>& records) {
  Summary s;
  const Rational m2 = density_m2(h);
  const double c = cfg.c ? *cfg.c : default_c(h, cfg.epsilon);
  for (const Cell& cell : cells(cfg)) {
    CellSummary cs;
    cs.n = cell.n;
    cs.p = cell.p;
    std::vector<double> left, base;
    for (const auto& r : records) {
      if (r.n != cell.n || r.p != cell.p) continue;
      ++cs.trials;
      if (r.status != "ok") ++cs.failures;
      if (r.leftover) left.push_back(static_cast<double>(*r.leftover));
      if (r.baseline_leftover) base.push_back(static_cast<double>(*r.baseline_leftover));
    }
    cs.median_leftover = median(left);
    cs.median_baseline_leftover = median(base);
    cs.theorem_bound = theorem_bound(cell.p, m2, cfg.gamma, cfg.C);
    cs.adversary_lower_bound = detail::isolated_set_value(h.vertex_count(), h.edge_count(), cell.n, cell.p, c);
    cs.regime = to_string(regime_check(cell.n, cell.p, m2, cfg.C).regime);
    s.cells.push_back(cs);
  }
  for (auto n : cfg.n_values) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& cs : s.cells)
      if (cs.n == n && cs.median_leftover && *cs.median_leftover >= 1.0)
        pts.emplace_back(std::log(1.0 / cs.p), std::log(*cs.median_leftover));
    s.fits.push_back(fit_slope(n, pts));
  }
  return s;
}

struct SweepResult {
  std::vector<TrialRecord> records;
  Summary summary;
};

/// All cells times trials; trials run on cfg.threads workers and are
/// collected in (cell, trial) order.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const Pattern h = load_pattern(cfg.pattern);
  const auto cs = cells(cfg);
  const std::size_t total = cs.size() * cfg.trials_per_cell;
  SweepResult out;
  out.records = detail::parallel_map(total, cfg.threads, [&](std::size_t i) {
    return run_trial(cfg, h, cs[i / cfg.trials_per_cell], i % cfg.trials_per_cell);
  });
  out.summary = summarize(cfg, h, out.records);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["pattern"] = cfg.pattern;
  j["n_values"] = cfg.n_values;
  j["p_values"] = cfg.p_values;
  if (cfg.p_grid) j["p_grid"] = {{"p_min", cfg.p_grid->p_min}, {"p_max", cfg.p_grid->p_max}, {"points", cfg.p_grid->points}};
  j["gamma"] = cfg.gamma;
  j["C"] = cfg.C;
  j["epsilon"] = cfg.epsilon;
  j["c"] = cfg.c ? nlohmann::json(*cfg.c) : nlohmann::json(nullptr);
  j["trials_per_cell"] = cfg.trials_per_cell;
  j["base_seed"] = cfg.base_seed;
  j["mode"] = to_string(cfg.mode);
  j["output"] = cfg.output;
  j["sweeps"] = cfg.sweeps;
  j["swap_budget"] = cfg.swap_budget;
  j["max_resamples"] = cfg.max_resamples;
  j["x_override"] = cfg.x_override ? nlohmann::json(*cfg.x_override) : nlohmann::json(nullptr);
  j["threads"] = cfg.threads;
  return j;
}

/// Overlays the keys present in j onto cfg. Unknown keys and type mismatches
/// are configuration errors.
inline void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "pattern") cfg.pattern = value.get<std::string>();
      else if (key == "n_values") cfg.n_values = value.get<std::vector<std::size_t>>();
      else if (key == "p_values") cfg.p_values = value.get<std::vector<double>>();
      else if (key == "p_grid") {
        if (value.is_null()) cfg.p_grid.reset();
        else cfg.p_grid = PGrid{value.at("p_min").get<double>(), value.at("p_max").get<double>(), value.at("points").get<std::size_t>()};
      } else if (key == "gamma") cfg.gamma = value.get<double>();
      else if (key == "C") cfg.C = value.get<double>();
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "c") cfg.c = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "trials_per_cell") cfg.trials_per_cell = value.get<std::size_t>();
      else if (key == "base_seed") cfg.base_seed = value.get<std::uint64_t>();
      else if (key == "mode") cfg.mode = parse_mode(value.get<std::string>());
      else if (key == "output") cfg.output = value.get<std::string>();
      else if (key == "sweeps") cfg.sweeps = value.get<std::size_t>();
      else if (key == "swap_budget") cfg.swap_budget = value.get<std::size_t>();
      else if (key == "max_resamples") cfg.max_resamples = value.get<std::size_t>();
      else if (key == "x_override")
        cfg.x_override = value.is_null() ? std::nullopt : std::optional<std::size_t>(value.get<std::size_t>());
      else if (key == "threads") cfg.threads = value.get<unsigned>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

/// Stable CSV column order.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "mode", "pattern", "n", "p", "trial", "seed", "gamma", "C", "epsilon", "c", "regime", "theorem_bound",
      "leftover", "copies", "baseline_leftover", "stages", "oracle_shortfalls", "partition_violations",
      "precondition_met", "packing_verified", "x_size", "deletions", "min_degree_before", "min_degree_after",
      "min_degree_ratio", "max_vertex_deletions", "isolation_accepted", "kimvu_feasible", "status", "reason", "wall_ms"};
  return cols;
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

template <typename T>
std::string fmt_opt(const std::optional<T>& x) {
  if (!x) return "";
  if constexpr (std::is_same_v<T, bool>) return *x ? "true" : "false";
  else if constexpr (std::is_same_v<T, double>) return fmt_double(*x);
  else return std::to_string(*x);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T parse_number(const std::string& s) {
  std::size_t used = 0;
  T value{};
  try {
    if constexpr (std::is_same_v<T, double>) value = std::stod(s, &used);
    else if constexpr (std::is_signed_v<T>) value = static_cast<T>(std::stoll(s, &used));
    else value = static_cast<T>(std::stoull(s, &used));
  } catch (const std::exception&) {
    throw IoError("bad CSV number '" + s + "'");
  }
  if (used != s.size()) throw IoError("bad CSV number '" + s + "'");
  return value;
}

template <typename T>
std::optional<T> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if constexpr (std::is_same_v<T, bool>) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw IoError("bad CSV boolean '" + s + "'");
  } else {
    return parse_number<T>(s);
  }
}

}  // namespace detail

/// Writes the trial table: two comment lines (format version, config JSON),
/// the header row, then one row per record. Strings are always quoted.
inline void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<TrialRecord>& records,
                      bool include_wall_time = true) {
  using detail::fmt_double;
  using detail::fmt_opt;
  using detail::quote;
  out << "# packbench trials format_version=" << kFormatVersion << "\n";
  out << "# config=" << to_json(cfg).dump() << "\n";
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : records) {
    out << quote(r.mode) << ',' << quote(r.pattern) << ',' << r.n << ',' << fmt_double(r.p) << ',' << r.trial << ','
        << r.seed << ',' << fmt_double(r.gamma) << ',' << fmt_double(r.C) << ',' << fmt_double(r.epsilon) << ','
        << fmt_double(r.c) << ',' << quote(r.regime) << ',' << fmt_double(r.theorem_bound) << ','
        << fmt_opt(r.leftover) << ',' << fmt_opt(r.copies) << ',' << fmt_opt(r.baseline_leftover) << ','
        << fmt_opt(r.stages) << ',' << fmt_opt(r.oracle_shortfalls) << ',' << fmt_opt(r.partition_violations) << ','
        << fmt_opt(r.precondition_met) << ',' << fmt_opt(r.packing_verified) << ',' << fmt_opt(r.x_size) << ','
        << fmt_opt(r.deletions) << ',' << fmt_opt(r.min_degree_before) << ',' << fmt_opt(r.min_degree_after) << ','
        << fmt_opt(r.min_degree_ratio) << ',' << fmt_opt(r.max_vertex_deletions) << ','
        << fmt_opt(r.isolation_accepted) << ',' << fmt_opt(r.kimvu_feasible) << ',' << quote(r.status) << ','
        << quote(r.reason) << ',' << fmt_double(include_wall_time ? r.wall_ms : 0.0) << "\n";
  }
}

/// Parses a table produced by write_csv.
inline std::vector<TrialRecord> read_csv(std::istream& in) {
  using namespace detail;
  std::string line;
  bool header_seen = false;
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    auto f = split_csv_line(line);
    if (!header_seen) {
      if (f != csv_columns()) throw IoError("unexpected CSV header");
      header_seen = true;
      continue;
    }
    if (f.size() != csv_columns().size()) throw IoError("CSV row has " + std::to_string(f.size()) + " fields");
    TrialRecord r;
    std::size_t i = 0;
    r.mode = f[i++];
    r.pattern = f[i++];
    r.n = parse_number<std::size_t>(f[i++]);
    r.p = parse_number<double>(f[i++]);
    r.trial = parse_number<std::size_t>(f[i++]);
    r.seed = parse_number<std::uint64_t>(f[i++]);
    r.gamma = parse_number<double>(f[i++]);
    r.C = parse_number<double>(f[i++]);
    r.epsilon = parse_number<double>(f[i++]);
    r.c = parse_number<double>(f[i++]);
    r.regime = f[i++];
    r.theorem_bound = parse_number<double>(f[i++]);
    r.leftover = parse_opt<std::int64_t>(f[i++]);
    r.copies = parse_opt<std::int64_t>(f[i++]);
    r.baseline_leftover = parse_opt<std::int64_t>(f[i++]);
    r.stages = parse_opt<std::int64_t>(f[i++]);
    r.oracle_shortfalls = parse_opt<std::int64_t>(f[i++]);
    r.partition_violations = parse_opt<std::int64_t>(f[i++]);
    r.precondition_met = parse_opt<bool>(f[i++]);
    r.packing_verified = parse_opt<bool>(f[i++]);
    r.x_size = parse_opt<std::int64_t>(f[i++]);
    r.deletions = parse_opt<std::int64_t>(f[i++]);
    r.min_degree_before = parse_opt<std::int64_t>(f[i++]);
    r.min_degree_after = parse_opt<std::int64_t>(f[i++]);
    r.min_degree_ratio = parse_opt<double>(f[i++]);
    r.max_vertex_deletions = parse_opt<std::int64_t>(f[i++]);
    r.isolation_accepted = parse_opt<bool>(f[i++]);
    r.kimvu_feasible = parse_opt<bool>(f[i++]);
    r.status = f[i++];
    r.reason = f[i++];
    r.wall_ms = parse_number<double>(f[i++]);
    records.push_back(std::move(r));
  }
  if (!header_seen) throw IoError("CSV header missing");
  return records;
}

inline nlohmann::json summary_json(const ExperimentConfig& cfg, const Summary& s) {
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = to_json(cfg);
  j["cells"] = nlohmann::json::array();
  for (const auto& c : s.cells)
    j["cells"].push_back({{"n", c.n},
                          {"p", c.p},
                          {"trials", c.trials},
                          {"failures", c.failures},
                          {"median_leftover", opt(c.median_leftover)},
                          {"median_baseline_leftover", opt(c.median_baseline_leftover)},
                          {"theorem_bound", c.theorem_bound},
                          {"adversary_lower_bound", c.adversary_lower_bound},
                          {"regime", c.regime}});
  j["fits"] = nlohmann::json::array();
  for (const auto& f : s.fits)
    j["fits"].push_back({{"n", f.n},
                         {"points", f.points},
                         {"slope", opt(f.slope)},
                         {"intercept", opt(f.intercept)},
                         {"residual", opt(f.residual)}});
  return j;
}

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

/// Writes <dir>/trials.csv and <dir>/summary.json, creating dir if needed.
inline EmittedFiles emit_results(const ExperimentConfig& cfg, const SweepResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  EmittedFiles files{dir / "trials.csv", dir / "summary.json"};
  {
    std::ofstream out(files.csv);
    if (!out) throw IoError("cannot open " + files.csv.string() + " for writing");
    write_csv(out, cfg, result.records);
    if (!out) throw IoError("write failed for " + files.csv.string());
  }
  {
    std::ofstream out(files.summary);
    if (!out) throw IoError("cannot open " + files.summary.string() + " for writing");
    out << summary_json(cfg, result.summary).dump(2) << "\n";
    if (!out) throw IoError("write failed for " + files.summary.string());
  }
  return files;
}

}  // namespace packbench

#endif  // PACKBENCH_EXPERIMENTS_HPP
