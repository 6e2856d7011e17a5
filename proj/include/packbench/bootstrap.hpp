#ifndef PACKBENCH_BOOTSTRAP_HPP
#define PACKBENCH_BOOTSTRAP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "packbench/graph.hpp"
#include "packbench/packing.hpp"
#include "packbench/pattern.hpp"
#include "packbench/random.hpp"

namespace packbench {

class RegimeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worst (vertex, part) pair of the last rejected partition sample.
struct DegreeWitness {
  Vertex vertex = 0;
  std::size_t part = 0;  // 0-based
  double required = 0.0;
  std::size_t actual = 0;
  [[nodiscard]] double deficit() const { return required - static_cast<double>(actual); }
};

class DegreeConditionUnsatisfiable : public std::runtime_error {
 public:
  explicit DegreeConditionUnsatisfiable(DegreeWitness w)
      : std::runtime_error("degree condition unsatisfiable: vertex " + std::to_string(w.vertex) + " has " +
                           std::to_string(w.actual) + " neighbours in part " + std::to_string(w.part + 1) +
                           ", needs " + std::to_string(w.required)),
        witness(w) {}
  DegreeWitness witness;
};

/// Rounds x to the nearest integer when it is within floating-point noise of
/// it, so exact powers such as (3/0.1)^2 do not ceil or floor the wrong way.
inline double snap_to_integer(double x) {
  const double r = std::nearbyint(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

/// (C/p)^m2 in floating point.
inline double partition_scale(double p, const Rational& m2, double C) {
  return std::pow(C / p, to_double(m2));
}

/// Geometric partition sizes |V_i| = floor(n / 2^i) for i < q, V_q takes the rest.
struct PartitionPlan {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<std::size_t> sizes;
  /// ceil((C/p)^m2); q is the largest integer with n / 2^(q-1) > threshold.
  std::uint64_t threshold = 0;
};

/// Plan for an integer threshold. Throws RegimeViolation when n <= threshold.
inline PartitionPlan plan_partition_for_threshold(std::size_t n, std::uint64_t threshold) {
  if (static_cast<std::uint64_t>(n) <= threshold)
    throw RegimeViolation("regime violation: n = " + std::to_string(n) + " does not exceed the threshold " +
                          std::to_string(threshold));
  PartitionPlan plan;
  plan.n = n;
  plan.threshold = threshold;
  // n / 2^(q-1) > T  <=>  n > T * 2^(q-1), exact in integers.
  std::size_t q = 1;
  while (q < 63) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(threshold) << q;
    if (!(static_cast<unsigned __int128>(n) > scaled)) break;
    ++q;
  }
  plan.q = q;
  std::size_t assigned = 0;
  for (std::size_t i = 1; i < q; ++i) {
    plan.sizes.push_back(n >> i);
    assigned += n >> i;
  }
  plan.sizes.push_back(n - assigned);
  return plan;
}

inline PartitionPlan plan_partition(std::size_t n, double p, const Rational& m2, double C) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("plan_partition: p must lie in (0,1]");
  if (!(C > 0.0)) throw std::invalid_argument("plan_partition: C must be positive");
  const double scale = snap_to_integer(partition_scale(p, m2, C));
  if (scale >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 4))
    throw RegimeViolation("regime violation: (C/p)^m2 overflows");
  return plan_partition_for_threshold(n, static_cast<std::uint64_t>(std::ceil(scale)));
}

struct BootstrapConfig {
  double gamma = 0.3;
  double C = 3.0;
  std::size_t max_resamples = 20;
  /// Seeds the random partition.
  std::uint64_t seed = 0;
  /// Strict: abort with DegreeConditionUnsatisfiable if no sample satisfies
  /// the per-part degree condition. Best effort: keep the sample with the
  /// fewest violations and record them in the trace.
  enum class PartitionPolicy { strict, best_effort } partition_policy = PartitionPolicy::best_effort;
  OracleConfig oracle;

  [[nodiscard]] double oracle_gamma() const { return gamma / 20; }
  [[nodiscard]] double stage_budget_fraction() const { return gamma / 10; }
  [[nodiscard]] double carry_fraction() const { return gamma / 4; }
  [[nodiscard]] double partition_margin() const { return gamma / 2; }
  [[nodiscard]] double merged_margin() const { return gamma / 4; }
};

inline void validate(const BootstrapConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw std::invalid_argument("BootstrapConfig: gamma must lie in (0,1)");
  if (!(cfg.C > 0.0)) throw std::invalid_argument("BootstrapConfig: C must be positive");
  if (cfg.max_resamples < 1) throw std::invalid_argument("BootstrapConfig: max_resamples must be >= 1");
  validate(cfg.oracle);
}

struct PartitionCheck {
  std::size_t violations = 0;
  DegreeWitness worst;
};

/// Checks deg(v, V_i) >= (1 - 1/chi_cr + margin) |V_i| p for every vertex and part.
inline PartitionCheck check_partition(const Graph& g, const std::vector<VertexSet>& parts, double margin,
                                      const Rational& chi_cr, double p) {
  const double coefficient = 1.0 - 1.0 / to_double(chi_cr) + margin;
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> part_of(n, 0);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (Vertex v : parts[i]) part_of[v] = static_cast<std::uint32_t>(i);
  PartitionCheck check;
  double worst_deficit = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> counts(parts.size());
  for (std::size_t v = 0; v < n; ++v) {
    std::fill(counts.begin(), counts.end(), 0);
    for (Vertex u : g.neighbors(static_cast<Vertex>(v))) ++counts[part_of[u]];
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const double required = coefficient * static_cast<double>(parts[i].size()) * p;
      const double deficit = required - static_cast<double>(counts[i]);
      if (deficit > 0) ++check.violations;
      if (deficit > worst_deficit) {
        worst_deficit = deficit;
        check.worst = {static_cast<Vertex>(v), i, required, counts[i]};
      }
    }
  }
  return check;
}

namespace detail {

inline std::vector<VertexSet> random_partition(std::size_t n, const PartitionPlan& plan, Rng& rng) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  shuffle(std::span<Vertex>(order), rng);
  std::vector<VertexSet> parts;
  std::size_t offset = 0;
  for (std::size_t size : plan.sizes) {
    parts.emplace_back(std::vector<Vertex>(order.begin() + static_cast<std::ptrdiff_t>(offset),
                                           order.begin() + static_cast<std::ptrdiff_t>(offset + size)),
                       n);
    offset += size;
  }
  return parts;
}

struct PartitionSample {
  std::vector<VertexSet> parts;
  PartitionCheck check;
  std::size_t attempts = 0;
};

inline PartitionSample sample_partition_best(const Graph& g, const PartitionPlan& plan, double gamma,
                                             const Rational& chi_cr, double p, std::size_t max_resamples,
                                             std::uint64_t seed) {
  if (plan.n != g.vertex_count()) throw std::invalid_argument("sample_partition: plan does not match the host");
  Rng rng(seed);
  PartitionSample best;
  for (std::size_t attempt = 1; attempt <= max_resamples; ++attempt) {
    auto parts = random_partition(g.vertex_count(), plan, rng);
    auto check = check_partition(g, parts, gamma / 2, chi_cr, p);
    const bool better = attempt == 1 || check.violations < best.check.violations;
    if (better) {
      best.parts = std::move(parts);
      best.check = check;
    }
    best.attempts = attempt;
    if (check.violations == 0) break;
  }
  return best;
}

}  // namespace detail

/// Uniformly random partition with the planned sizes in which every vertex
/// has deg(v, V_i) >= (1 - 1/chi_cr + gamma/2) |V_i| p for every part.
/// Resamples up to max_resamples times; throws DegreeConditionUnsatisfiable
/// with the worst witness of the last sample otherwise.
inline std::vector<VertexSet> sample_partition(const Graph& g, const PartitionPlan& plan, double gamma,
                                               const Rational& chi_cr, double p, std::size_t max_resamples,
                                               std::uint64_t seed) {
  if (plan.n != g.vertex_count()) throw std::invalid_argument("sample_partition: plan does not match the host");
  Rng rng(seed);
  DegreeWitness last;
  for (std::size_t attempt = 0; attempt < max_resamples; ++attempt) {
    auto parts = detail::random_partition(g.vertex_count(), plan, rng);
    auto check = check_partition(g, parts, gamma / 2, chi_cr, p);
    if (check.violations == 0) return parts;
    last = check.worst;
  }
  throw DegreeConditionUnsatisfiable(last);
}

/// gamma * (C/p)^m2.
inline double theorem_bound(double p, const Rational& m2, double gamma, double C) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("theorem_bound: p must lie in (0,1]");
  return gamma * partition_scale(p, m2, C);
}

enum class Regime { below, inside, above };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::below: return "below";
    case Regime::inside: return "inside";
    case Regime::above: return "above";
  }
  return "?";
}

struct RegimeReport {
  Regime regime = Regime::inside;
  /// C n^(-1/m2)
  double lower = 0.0;
  /// (ln n)^(-1/(m2-1))
  double upper = 0.0;
};

/// Where p sits relative to C n^(-1/m2) <= p <= (ln n)^(-1/(m2-1)); both
/// endpoints are closed.
inline RegimeReport regime_check(std::size_t n, double p, const Rational& m2, double C) {
  RegimeReport r;
  const double m = to_double(m2);
  const double nn = static_cast<double>(n);
  r.lower = C * std::pow(nn, -1.0 / m);
  r.upper = m > 1.0 && n > 1 ? std::pow(std::log(nn), -1.0 / (m - 1.0)) : std::numeric_limits<double>::infinity();
  if (p < r.lower) {
    r.regime = Regime::below;
  } else if (p > r.upper) {
    r.regime = Regime::above;
  } else {
    r.regime = Regime::inside;
  }
  return r;
}

inline RegimeReport regime_check(std::size_t n, double p, const Pattern& h, double C) {
  return regime_check(n, p, density_m2(h), C);
}

struct StageTrace {
  std::size_t stage = 0;  // 1-based
  std::size_t part_size = 0;
  std::size_t carried_leftover = 0;
  std::size_t pool_size = 0;
  std::size_t copies_added = 0;
  std::size_t stage_leftover = 0;
  /// min over pool vertices of deg(v, pool) / (|pool| p) - (1 - 1/chi_cr).
  double degree_margin = 0.0;
  /// gamma/2 on the first stage, gamma/4 once a leftover is merged in.
  double required_margin = 0.0;
  /// gamma |V_i| / 10
  double stage_budget = 0.0;
  /// |U| <= gamma |V_i| / 4 before packing.
  bool carry_ok = true;
  bool oracle_shortfall = false;
};

struct BootstrapResult {
  Packing packing;
  PartitionPlan plan;
  std::vector<StageTrace> stages;
  /// delta(G) >= (1 - 1/chi_cr + gamma) n p on the input.
  bool precondition_met = true;
  std::size_t partition_attempts = 0;
  std::size_t partition_violations = 0;
  DegreeWitness worst_partition_witness;
  /// |V_q| > 3 * threshold (the proof's large-n assumption fails).
  bool last_part_oversized = false;
};

/// Geometric-partition bootstrap: pack G[V_1], then repeatedly pack G[U ∪
/// V_{i+1}] where U is the previous stage's leftover, merging all copies.
/// The oracle sees each stage as a standalone graph.
template <PackingOracle Oracle>
BootstrapResult bootstrap_pack(const Graph& g, const Pattern& h, double p, const BootstrapConfig& cfg,
                               const Oracle& oracle) {
  validate(cfg);
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("bootstrap_pack: p must lie in (0,1]");
  const std::size_t n = g.vertex_count();
  const auto params = pattern_params(h);
  const double base = 1.0 - 1.0 / to_double(params.chi_cr);

  BootstrapResult result;
  result.precondition_met =
      static_cast<double>(min_degree(g)) >= (base + cfg.gamma) * static_cast<double>(n) * p;
  result.plan = plan_partition(n, p, params.m2, cfg.C);
  result.last_part_oversized = result.plan.sizes.back() > 3 * result.plan.threshold;

  std::vector<VertexSet> parts;
  if (cfg.partition_policy == BootstrapConfig::PartitionPolicy::strict) {
    parts = sample_partition(g, result.plan, cfg.gamma, params.chi_cr, p, cfg.max_resamples, cfg.seed);
    result.partition_attempts = 0;
    result.partition_violations = 0;
  } else {
    auto sample = detail::sample_partition_best(g, result.plan, cfg.gamma, params.chi_cr, p, cfg.max_resamples, cfg.seed);
    parts = std::move(sample.parts);
    result.partition_attempts = sample.attempts;
    result.partition_violations = sample.check.violations;
    result.worst_partition_witness = sample.check.worst;
  }

  std::vector<Copy> merged;
  std::vector<Vertex> carried;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    StageTrace trace;
    trace.stage = i + 1;
    trace.part_size = parts[i].size();
    trace.carried_leftover = carried.size();
    trace.required_margin = i == 0 ? cfg.partition_margin() : cfg.merged_margin();
    trace.stage_budget = cfg.stage_budget_fraction() * static_cast<double>(parts[i].size());
    trace.carry_ok = static_cast<double>(carried.size()) <= cfg.carry_fraction() * static_cast<double>(parts[i].size());

    std::vector<Vertex> pool_members(parts[i].begin(), parts[i].end());
    pool_members.insert(pool_members.end(), carried.begin(), carried.end());
    const VertexSet pool(std::move(pool_members), n);
    trace.pool_size = pool.size();

    const auto stage_graph = induced_subgraph(g, pool);
    double min_ratio = std::numeric_limits<double>::infinity();
    const double scale = static_cast<double>(pool.size()) * p;
    for (std::size_t v = 0; v < pool.size(); ++v)
      min_ratio = std::min(min_ratio, static_cast<double>(stage_graph.graph.degree(static_cast<Vertex>(v))) / scale);
    trace.degree_margin = min_ratio - base;

    OracleConfig stage_cfg = cfg.oracle;
    stage_cfg.seed = i == 0 ? cfg.oracle.seed : derive_seed(cfg.oracle.seed, i);
    const Packing stage = oracle(stage_graph.graph, h, stage_cfg);

    trace.copies_added = stage.copies.size();
    for (const Copy& c : stage.copies) {
      std::vector<Vertex> witness;
      for (Vertex v : c.witness()) witness.push_back(stage_graph.to_host[v]);
      merged.emplace_back(std::move(witness), h.graph());
    }
    carried.clear();
    for (Vertex v : stage.leftover) carried.push_back(stage_graph.to_host[v]);
    trace.stage_leftover = carried.size();
    trace.oracle_shortfall = static_cast<double>(carried.size()) > trace.stage_budget;
    result.stages.push_back(trace);
  }
  result.packing = Packing::from_copies(n, std::move(merged));
  return result;
}

inline BootstrapResult bootstrap_pack(const Graph& g, const Pattern& h, double p, const BootstrapConfig& cfg) {
  return bootstrap_pack(g, h, p, cfg, HeuristicOracle{});
}

}  // namespace packbench

#endif  // PACKBENCH_BOOTSTRAP_HPP
