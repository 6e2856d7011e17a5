#ifndef PACKBENCH_ADVERSARY_HPP
#define PACKBENCH_ADVERSARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "packbench/bootstrap.hpp"
#include "packbench/enumerate.hpp"
#include "packbench/graph.hpp"
#include "packbench/pattern.hpp"
#include "packbench/random.hpp"

namespace packbench {

namespace detail {

inline std::uint64_t floor_count(double value) {
  if (!(value > 0.0)) return 0;
  if (value >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::floor(snap_to_integer(value)));
}

/// c / (n^(v-3) p^(e-1)) as a real.
inline double isolated_set_value(std::size_t v, std::size_t e, std::size_t n, double p, double c) {
  const double denominator = std::pow(static_cast<double>(n), static_cast<double>(v) - 3.0) *
                             std::pow(p, static_cast<double>(e) - 1.0);
  if (denominator == 0.0) return std::numeric_limits<double>::infinity();
  return c / denominator;
}

inline std::uint64_t isolated_set_size(std::size_t v, std::size_t e, std::size_t n, double p, double c) {
  if (!(p > 0.0)) throw std::invalid_argument("isolated_set_size: p must be positive");
  return std::min<std::uint64_t>(floor_count(isolated_set_value(v, e, n, p, c)), n);
}

}  // namespace detail

/// floor(c / (n^(v(H)-3) p^(e(H)-1))), capped at n.
inline std::uint64_t isolated_set_size(std::size_t n, double p, const Pattern& h, double c) {
  return detail::isolated_set_size(h.vertex_count(), h.edge_count(), n, p, c);
}

/// Cycle specialization (v = e = t).
inline std::uint64_t cycle_lower_bound(std::size_t t, std::size_t n, double p, double c) {
  if (t < 3) throw std::invalid_argument("cycle_lower_bound: t must be >= 3");
  return detail::isolated_set_size(t, t, n, p, c);
}

struct CliqueBound {
  std::uint64_t count = 0;
  /// Maximizing clique size (smallest on ties).
  std::size_t argmax = 3;
  double value = 0.0;
};

/// max over l in 3..t of c / (n^(l-3) p^(l(l-1)/2 - 1)). Not capped at n.
inline CliqueBound clique_lower_bound(std::size_t t, std::size_t n, double p, double c) {
  if (t < 3) throw std::invalid_argument("clique_lower_bound: t must be >= 3");
  if (!(p > 0.0)) throw std::invalid_argument("clique_lower_bound: p must be positive");
  CliqueBound best;
  best.value = -1.0;
  for (std::size_t l = 3; l <= t; ++l) {
    const double value = detail::isolated_set_value(l, l * (l - 1) / 2, n, p, c);
    if (value > best.value * (1.0 + 1e-12)) {
      best.value = value;
      best.argmax = l;
    }
  }
  best.count = detail::floor_count(best.value);
  return best;
}

/// Kim-Vu parameter arithmetic for the copies through a vertex that meet X.
struct KimVuReport {
  std::size_t k = 0;  // e(H)
  /// x_size * C(n, v-2) * p^e
  double e0 = 0.0;
  /// x_size * n^(v-2) * p^e * v^(-v)
  double e0_lower = 0.0;
  /// Exponent of n in the E_i bound, exact: v - 2 - (i-1)/m2.
  std::vector<Rational> ei_exponents;
  /// E_i <= n^(v - (i-1)/m2 - 2) p^(e-i), i = 1..e
  std::vector<double> ei_bounds;
  double eprime = 0.0;
  /// E0 / sqrt(E0 E')
  double ratio = 0.0;
  /// sqrt(x_size p v^(-v))
  double ratio_lower = 0.0;
  /// (2 e ln n)^e
  double ratio_threshold = 0.0;
  bool feasible = false;
  double ak = 0.0;
  double dk = 0.0;
  /// Tail parameter, fixed at 2 ln n.
  double lambda = 0.0;
};

inline double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return out;
}

/// x_size is real-valued so the formal |X| of the construction can be
/// evaluated even where it exceeds n.
inline KimVuReport kimvu_report(const Pattern& h, std::size_t n, double p, double x_size) {
  if (n < h.vertex_count()) throw std::invalid_argument("kimvu_report: n must be >= v(H)");
  if (!(p > 0.0)) throw std::invalid_argument("kimvu_report: p must be positive");
  const auto v = static_cast<std::int64_t>(h.vertex_count());
  const auto e = static_cast<std::int64_t>(h.edge_count());
  const Rational m2 = density_m2(h);
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);

  KimVuReport r;
  r.k = static_cast<std::size_t>(e);
  r.e0 = x_size * binomial(n, static_cast<std::size_t>(v - 2)) * std::pow(p, static_cast<double>(e));
  r.e0_lower = x_size * std::pow(nn, static_cast<double>(v - 2)) * std::pow(p, static_cast<double>(e)) *
               std::pow(static_cast<double>(v), -static_cast<double>(v));
  for (std::int64_t i = 1; i <= e; ++i) {
    const Rational exponent = Rational(v - 2) - Rational(i - 1) / m2;
    r.ei_exponents.push_back(exponent);
    r.ei_bounds.push_back(std::pow(nn, to_double(exponent)) * std::pow(p, static_cast<double>(e - i)));
  }
  r.eprime = *std::max_element(r.ei_bounds.begin(), r.ei_bounds.end());
  r.ratio = r.e0 > 0.0 ? r.e0 / std::sqrt(r.e0 * r.eprime) : 0.0;
  r.ratio_lower = std::sqrt(std::max(0.0, x_size * p * std::pow(static_cast<double>(v), -static_cast<double>(v))));
  r.ratio_threshold = std::pow(2.0 * static_cast<double>(e) * log_n, static_cast<double>(e));
  r.feasible = r.e0 > 0.0 && r.ratio >= r.ratio_threshold;
  r.ak = std::pow(8.0, static_cast<double>(e)) * std::sqrt(std::tgamma(static_cast<double>(e) + 1.0));
  r.dk = 2.0 * std::exp(2.0);
  r.lambda = 2.0 * log_n;
  return r;
}

/// Lower end n^(-1/m2) and upper cap c^2 (ln n)^(-2e/(e-2)) n^(-(v-3)/(e-2))
/// of the p-window in which the deletion construction is guaranteed.
struct DeletionWindow {
  double lower = 0.0;
  double upper = 0.0;
};

inline DeletionWindow deletion_window(const Pattern& h, std::size_t n, double c) {
  const double v = static_cast<double>(h.vertex_count());
  const double e = static_cast<double>(h.edge_count());
  const double nn = static_cast<double>(n);
  DeletionWindow w;
  w.lower = std::pow(nn, -1.0 / to_double(density_m2(h)));
  w.upper = c * c * std::pow(std::log(nn), -2.0 * e / (e - 2.0)) * std::pow(nn, -(v - 3.0) / (e - 2.0));
  return w;
}

struct AdversaryConfig {
  double epsilon = 0.2;
  /// Construction constant; defaults to min{epsilon / c_emp, (2 e v)^(-2e)}.
  std::optional<double> c;
  double c_emp = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> x_override;
};

inline double default_c(const Pattern& h, double epsilon, double c_emp = 1.0) {
  const double ev = 2.0 * static_cast<double>(h.edge_count()) * static_cast<double>(h.vertex_count());
  return std::min(epsilon / c_emp, std::pow(ev, -2.0 * static_cast<double>(h.edge_count())));
}

inline double effective_c(const Pattern& h, const AdversaryConfig& cfg) {
  return cfg.c ? *cfg.c : default_c(h, cfg.epsilon, cfg.c_emp);
}

inline void validate(const AdversaryConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw std::invalid_argument("AdversaryConfig: epsilon must lie in (0,1)");
  if (cfg.c && !(*cfg.c > 0.0)) throw std::invalid_argument("AdversaryConfig: c must be positive");
  if (!(cfg.c_emp > 0.0)) throw std::invalid_argument("AdversaryConfig: c_emp must be positive");
}

struct Deletion {
  Edge edge;
  /// The copy whose processing deleted the edge.
  Copy killed;
  /// |V(copy) ∩ X|
  std::size_t x_hits = 0;
};

struct AdversaryOutcome {
  Graph original;
  Graph degraded;
  VertexSet x;
  std::vector<Deletion> deleted;
  std::vector<std::size_t> per_vertex_deletions;
  /// |X^w| in the original graph: copies through w meeting X \ {w}.
  std::vector<std::size_t> xw_counts;
  std::size_t min_degree_before = 0;
  std::size_t min_degree_after = 0;
  std::size_t max_vertex_deletions = 0;
  double c = 0.0;
  KimVuReport kimvu;
};

/// Deletes one edge per copy meeting the given X until X meets no copy of H.
///
/// Copies meeting X are processed in enumeration order; a copy is skipped once
/// one of its edges is gone (deletions never create copies). For a copy with
/// at least two vertices in X the lexicographically first edge is deleted,
/// otherwise the first edge avoiding X.
inline AdversaryOutcome adversary_construct(const Graph& gamma_graph, const Pattern& h, double p, VertexSet x,
                                            const AdversaryConfig& cfg) {
  validate(cfg);
  const std::size_t n = gamma_graph.vertex_count();
  AdversaryOutcome out;
  out.original = gamma_graph;
  out.c = effective_c(h, cfg);
  out.x = std::move(x);
  const auto x_mask = out.x.mask(n);

  const auto targets = copies_meeting_set(gamma_graph, h, out.x);
  out.xw_counts.assign(n, 0);
  for (const Copy& c : targets) {
    std::size_t hits = 0;
    for (Vertex v : c.vertices()) hits += x_mask[v];
    for (Vertex w : c.vertices())
      if (hits - x_mask[w] > 0) ++out.xw_counts[w];
  }

  out.per_vertex_deletions.assign(n, 0);
  std::unordered_set<std::uint64_t> gone;
  auto key = [n](const Edge& e) { return static_cast<std::uint64_t>(e.u) * n + e.v; };
  std::vector<Edge> removals;
  for (const Copy& c : targets) {
    const bool alive = std::none_of(c.edges().begin(), c.edges().end(), [&](const Edge& e) { return gone.count(key(e)); });
    if (!alive) continue;
    std::size_t hits = 0;
    for (Vertex v : c.vertices()) hits += x_mask[v];
    std::optional<Edge> chosen;
    if (hits >= 2) {
      chosen = c.edges().front();
    } else {
      for (const Edge& e : c.edges())
        if (!x_mask[e.u] && !x_mask[e.v]) {
          chosen = e;
          break;
        }
    }
    if (!chosen) throw std::logic_error("adversary_construct: copy meeting X once has no X-disjoint edge");
    gone.insert(key(*chosen));
    removals.push_back(*chosen);
    ++out.per_vertex_deletions[chosen->u];
    ++out.per_vertex_deletions[chosen->v];
    out.deleted.push_back({*chosen, c, hits});
  }
  out.degraded = delete_edges(gamma_graph, removals);
  out.min_degree_before = n > 0 ? min_degree(gamma_graph) : 0;
  out.min_degree_after = n > 0 ? min_degree(out.degraded) : 0;
  out.max_vertex_deletions =
      out.per_vertex_deletions.empty() ? 0 : *std::max_element(out.per_vertex_deletions.begin(), out.per_vertex_deletions.end());
  if (n >= h.vertex_count() && p > 0.0) out.kimvu = kimvu_report(h, n, p, static_cast<double>(out.x.size()));
  return out;
}

/// X is a uniformly random set of isolated_set_size (or x_override) vertices,
/// drawn by a seeded partial Fisher-Yates shuffle.
inline AdversaryOutcome adversary_construct(const Graph& gamma_graph, const Pattern& h, double p,
                                            const AdversaryConfig& cfg) {
  validate(cfg);
  const std::size_t n = gamma_graph.vertex_count();
  const double c = effective_c(h, cfg);
  const std::size_t x_size =
      cfg.x_override ? *cfg.x_override : static_cast<std::size_t>(p > 0.0 ? isolated_set_size(n, p, h, c) : 0);
  if (x_size > n) throw std::invalid_argument("adversary_construct: |X| exceeds n");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < x_size; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(order[i], order[j]);
  }
  VertexSet x(std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(x_size)), n);
  return adversary_construct(gamma_graph, h, p, std::move(x), cfg);
}

struct IsolationVerdict {
  bool accepted = true;
  std::size_t copies_found = 0;
  std::vector<Copy> witnesses;  // at most a few
  explicit operator bool() const noexcept { return accepted; }
};

/// Recomputes from scratch that no copy of H in the degraded graph meets X.
inline IsolationVerdict verify_isolation(const AdversaryOutcome& outcome, const Pattern& h) {
  IsolationVerdict verdict;
  auto found = copies_meeting_set(outcome.degraded, h, outcome.x);
  verdict.copies_found = found.size();
  verdict.accepted = found.empty();
  if (found.size() > 3) found.resize(3);
  verdict.witnesses = std::move(found);
  return verdict;
}

}  // namespace packbench

#endif  // PACKBENCH_ADVERSARY_HPP
