#ifndef PACKBENCH_PATTERN_HPP
#define PACKBENCH_PATTERN_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "packbench/graph.hpp"

namespace packbench {

/// Exact rational; boost keeps it normalized (lowest terms, positive denominator).
using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline constexpr std::size_t kMaxPatternVertices = 10;

/// Union-find component count.
inline std::size_t component_count(const Graph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = g.vertex_count();
  for (const Edge& e : g.edges()) {
    auto a = find(e.u);
    auto b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

/// A forest has exactly v - c edges; anything more closes a cycle.
inline bool has_cycle(const Graph& g) {
  return g.edge_count() + component_count(g) > g.vertex_count();
}

/// The small fixed graph H being packed. Validated on construction:
/// 3 <= v(H) <= 10 and H contains a cycle.
class Pattern {
 public:
  Pattern(Graph graph, std::string name) : graph_(std::move(graph)), name_(std::move(name)) {
    if (graph_.vertex_count() < 3) throw std::invalid_argument("pattern needs at least 3 vertices");
    if (graph_.vertex_count() > kMaxPatternVertices)
      throw std::invalid_argument("pattern exceeds the " + std::to_string(kMaxPatternVertices) + "-vertex cap");
    if (!has_cycle(graph_)) throw std::invalid_argument("pattern must contain a cycle");
  }

  [[nodiscard]] const Graph& graph() const noexcept { return graph_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return graph_.edge_count(); }

 private:
  Graph graph_;
  std::string name_;
};

inline Pattern complete_pattern(std::size_t t) { return Pattern(complete_graph(t), "K" + std::to_string(t)); }
inline Pattern cycle_pattern(std::size_t t) { return Pattern(cycle_graph(t), "C" + std::to_string(t)); }

/// Parses "K3".."K10" / "C3".."C10"; nullopt for anything else.
inline std::optional<Pattern> pattern_from_preset(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'K' && name[0] != 'C')) return std::nullopt;
  const std::string digits = name.substr(1);
  if (!std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
      digits.size() > 2)
    return std::nullopt;
  const auto t = static_cast<std::size_t>(std::stoul(digits));
  if (t < 3 || t > kMaxPatternVertices || std::to_string(t) != digits) return std::nullopt;
  return name[0] == 'K' ? complete_pattern(t) : cycle_pattern(t);
}

/// Preset name, or otherwise a path to an edge-list file.
inline Pattern load_pattern(const std::string& name_or_path) {
  if (auto preset = pattern_from_preset(name_or_path)) return *preset;
  return Pattern(read_edge_list_file(name_or_path), name_or_path);
}

namespace detail {

inline std::vector<std::uint32_t> adjacency_masks(const Graph& h) {
  std::vector<std::uint32_t> adj(h.vertex_count(), 0);
  for (const Edge& e : h.edges()) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  return adj;
}

inline std::int64_t induced_edges(const std::vector<std::uint32_t>& adj, std::uint32_t subset) {
  std::int64_t twice = 0;
  for (std::uint32_t rest = subset; rest != 0; rest &= rest - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(rest));
    twice += std::popcount(adj[v] & subset);
  }
  return twice / 2;
}

}  // namespace detail

/// m2(H) = max (e(H') - 1) / (v(H') - 2) over subgraphs with v(H') >= 3.
///
/// For a fixed vertex subset the induced subgraph maximizes the ratio, so
/// only vertex subsets are enumerated.
inline Rational density_m2(const Pattern& h) {
  const auto adj = detail::adjacency_masks(h.graph());
  const auto k = h.vertex_count();
  std::optional<Rational> best;
  for (std::uint32_t subset = 0; subset < (1U << k); ++subset) {
    const auto size = std::popcount(subset);
    if (size < 3) continue;
    const Rational ratio(detail::induced_edges(adj, subset) - 1, size - 2);
    if (!best || ratio > *best) best = ratio;
  }
  return *best;
}

namespace detail {

// Colors vertices in id order; vertex i may take any color already used or
// the next fresh one, so each partition into classes is visited once.
template <typename Visit>
void for_each_coloring(const std::vector<std::uint32_t>& adj, std::size_t colors, Visit&& visit) {
  const std::size_t k = adj.size();
  std::vector<std::uint32_t> classes(colors, 0);
  auto rec = [&](auto&& self, std::size_t v, std::size_t used) -> bool {
    if (v == k) return visit(classes, used);
    const std::size_t limit = std::min(colors, used + 1);
    for (std::size_t c = 0; c < limit; ++c) {
      if (classes[c] & adj[v]) continue;
      classes[c] |= 1U << v;
      const bool keep_going = self(self, v + 1, std::max(used, c + 1));
      classes[c] &= ~(1U << v);
      if (!keep_going) return false;
    }
    return true;
  };
  rec(rec, 0, 0);
}

}  // namespace detail

/// Exact chromatic number by exhaustive search (patterns have <= 10 vertices).
inline std::size_t chromatic_number(const Graph& h) {
  if (h.vertex_count() == 0) return 0;
  if (h.vertex_count() > kMaxPatternVertices) throw std::invalid_argument("chromatic_number: graph too large");
  const auto adj = detail::adjacency_masks(h);
  for (std::size_t colors = 1; colors <= h.vertex_count(); ++colors) {
    bool found = false;
    detail::for_each_coloring(adj, colors, [&](const auto&, std::size_t) {
      found = true;
      return false;
    });
    if (found) return colors;
  }
  return h.vertex_count();
}

inline std::size_t chromatic_number(const Pattern& h) { return chromatic_number(h.graph()); }

/// sigma(H): over proper colorings with exactly chi(H) colors, the minimum
/// size of the smallest color class.
inline std::size_t sigma_min_class(const Graph& h) {
  if (h.vertex_count() == 0) return 0;
  const auto chi = chromatic_number(h);
  const auto adj = detail::adjacency_masks(h);
  std::size_t best = h.vertex_count();
  detail::for_each_coloring(adj, chi, [&](const std::vector<std::uint32_t>& classes, std::size_t used) {
    if (used != chi) return true;
    for (auto cls : classes) best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(cls)));
    return best > 1;
  });
  return best;
}

inline std::size_t sigma_min_class(const Pattern& h) { return sigma_min_class(h.graph()); }

/// chi_cr(H) = (chi - 1) v / (v - sigma).
inline Rational critical_chromatic(std::size_t chi, std::size_t sigma, std::size_t v) {
  if (v <= sigma) throw std::invalid_argument("critical_chromatic: requires v(H) > sigma(H)");
  return Rational(static_cast<std::int64_t>((chi - 1) * v), static_cast<std::int64_t>(v - sigma));
}

inline Rational critical_chromatic(const Pattern& h) {
  return critical_chromatic(chromatic_number(h), sigma_min_class(h), h.vertex_count());
}

/// ((t+1)t - 2) / (2(t-1)), which equals m2(K_{t+1}).
inline Rational clique_m2_closed_form(std::int64_t t) {
  if (t < 2) throw std::invalid_argument("clique_m2_closed_form: t must be >= 2");
  return Rational((t + 1) * t - 2, 2 * (t - 1));
}

struct PatternParams {
  Rational m2;
  std::size_t chi = 0;
  std::size_t sigma = 0;
  Rational chi_cr;

  /// 1 - 1/chi_cr, the minimum-degree coefficient of the tiling threshold.
  [[nodiscard]] Rational degree_coefficient() const { return Rational(1) - Rational(1) / chi_cr; }
};

inline PatternParams pattern_params(const Pattern& h) {
  PatternParams params;
  params.m2 = density_m2(h);
  params.chi = chromatic_number(h);
  params.sigma = sigma_min_class(h);
  params.chi_cr = critical_chromatic(params.chi, params.sigma, h.vertex_count());
  return params;
}

}  // namespace packbench

#endif  // PACKBENCH_PATTERN_HPP
