#ifndef PACKBENCH_ENUMERATE_HPP
#define PACKBENCH_ENUMERATE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "packbench/graph.hpp"
#include "packbench/pattern.hpp"

namespace packbench {

/// One embedded copy of H: an injective map pattern vertex -> host vertex
/// that realizes every pattern edge. Two copies are equal iff they cover the
/// same host vertices with the same host edges, i.e. witnesses that differ by
/// an automorphism of H describe the same copy.
class Copy {
 public:
  Copy() = default;
  Copy(std::vector<Vertex> witness, const Graph& pattern) : witness_(std::move(witness)) {
    vertices_ = witness_;
    std::sort(vertices_.begin(), vertices_.end());
    edges_.reserve(pattern.edge_count());
    for (const Edge& e : pattern.edges()) edges_.emplace_back(witness_[e.u], witness_[e.v]);
    std::sort(edges_.begin(), edges_.end());
  }

  /// witness()[i] is the host image of pattern vertex i.
  [[nodiscard]] std::span<const Vertex> witness() const noexcept { return witness_; }
  /// Host vertices, ascending.
  [[nodiscard]] std::span<const Vertex> vertices() const noexcept { return vertices_; }
  /// Host edges, lexicographic.
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  [[nodiscard]] bool contains(Vertex v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
  }

  friend bool operator==(const Copy& a, const Copy& b) {
    return a.edges_ == b.edges_ && a.vertices_ == b.vertices_;
  }
  /// Enumeration order: lexicographic by sorted edge image.
  friend bool operator<(const Copy& a, const Copy& b) {
    if (a.edges_ != b.edges_) return a.edges_ < b.edges_;
    return a.vertices_ < b.vertices_;
  }

 private:
  std::vector<Vertex> witness_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

struct CopyList {
  std::vector<Copy> copies;
  bool truncated = false;
};

namespace detail {

/// Pattern-side search state: match orders and the symmetry-breaking
/// conditions that select one witness per copy.
class Embedder {
 public:
  static constexpr std::size_t kMax = kMaxPatternVertices;

  explicit Embedder(const Graph& pattern) : pattern_(pattern), k_(pattern.vertex_count()) {
    adj_ = adjacency_masks(pattern_);
    build_symmetry_conditions();
    global_plan_ = make_plan(std::nullopt);
    rooted_plans_.reserve(k_);
    for (std::size_t u = 0; u < k_; ++u) rooted_plans_.push_back(make_plan(static_cast<Vertex>(u)));
  }

  [[nodiscard]] const Graph& pattern() const noexcept { return pattern_; }
  [[nodiscard]] std::size_t size() const noexcept { return k_; }
  /// Pairs (a, b) meaning image(a) < image(b).
  [[nodiscard]] const std::vector<std::pair<Vertex, Vertex>>& conditions() const noexcept { return conditions_; }

  struct Query {
    const Graph* host = nullptr;
    /// Empty span: every host vertex is allowed.
    std::span<const std::uint8_t> allowed{};
    /// Unique witness per copy when true; any witness otherwise.
    bool break_symmetry = true;
  };

  /// Visits embeddings. visit(std::span<const Vertex> witness) returns false
  /// to stop. Returns false iff stopped early.
  template <typename Visit>
  bool for_each(const Query& q, Visit&& visit) const {
    return run(global_plan_, q, std::nullopt, visit);
  }

  /// Embeddings whose image contains w (each copy once when breaking symmetry).
  template <typename Visit>
  bool for_each_through(const Query& q, Vertex w, Visit&& visit) const {
    if (!q.allowed.empty() && !q.allowed[w]) return true;
    for (std::size_t u = 0; u < k_; ++u)
      if (!run(rooted_plans_[u], q, w, visit)) return false;
    return true;
  }

  /// First embedding through w, if any.
  [[nodiscard]] std::optional<std::vector<Vertex>> find_through(const Query& q, Vertex w) const {
    std::optional<std::vector<Vertex>> found;
    for_each_through(q, w, [&](std::span<const Vertex> witness) {
      found.emplace(witness.begin(), witness.end());
      return false;
    });
    return found;
  }

 private:
  struct Plan {
    std::array<Vertex, kMax> order{};
    // back[i]: earlier positions adjacent (in H) to order[i].
    std::array<std::vector<std::uint8_t>, kMax> back;
    // For each position, symmetry conditions whose other end is earlier:
    // (earlier position, true if image(order[i]) must exceed it).
    std::array<std::vector<std::pair<std::uint8_t, bool>>, kMax> sym;
    std::array<std::size_t, kMax> degree{};
  };

  // Connectivity-respecting order: start at root (or a max-degree vertex),
  // then repeatedly take the vertex with most already-placed neighbors,
  // breaking ties by degree and then by id.
  Plan make_plan(std::optional<Vertex> root) const {
    Plan plan;
    std::uint32_t placed = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      std::size_t best = k_;
      int best_links = -1;
      int best_degree = -1;
      for (std::size_t v = 0; v < k_; ++v) {
        if (placed & (1U << v)) continue;
        int links = std::popcount(adj_[v] & placed);
        int deg = std::popcount(adj_[v]);
        if (i == 0 && root) {
          if (v != *root) continue;
        }
        if (links > best_links || (links == best_links && deg > best_degree)) {
          best = v;
          best_links = links;
          best_degree = deg;
        }
      }
      plan.order[i] = static_cast<Vertex>(best);
      placed |= 1U << best;
    }
    std::array<std::uint8_t, kMax> position{};
    for (std::size_t i = 0; i < k_; ++i) position[plan.order[i]] = static_cast<std::uint8_t>(i);
    for (std::size_t i = 0; i < k_; ++i) {
      const Vertex v = plan.order[i];
      plan.degree[i] = static_cast<std::size_t>(std::popcount(adj_[v]));
      for (std::size_t j = 0; j < i; ++j)
        if (adj_[v] & (1U << plan.order[j])) plan.back[i].push_back(static_cast<std::uint8_t>(j));
    }
    for (const auto& [a, b] : conditions_) {
      const auto pa = position[a];
      const auto pb = position[b];
      if (pa < pb) {
        plan.sym[pb].emplace_back(pa, true);  // image(b) > image(a)
      } else {
        plan.sym[pa].emplace_back(pb, false);  // image(a) < image(b)
      }
    }
    return plan;
  }

  // Is there an automorphism fixing `fixed` pointwise and mapping from -> to?
  bool automorphism_exists(std::uint32_t fixed, Vertex from, Vertex to) const {
    std::array<int, kMax> image{};
    image.fill(-1);
    std::uint32_t used = 0;
    for (std::size_t v = 0; v < k_; ++v)
      if (fixed & (1U << v)) {
        image[v] = static_cast<int>(v);
        used |= 1U << v;
      }
    if (used & (1U << to)) return from == to;
    image[from] = static_cast<int>(to);
    used |= 1U << to;
    auto consistent = [&](std::size_t v) {
      for (std::size_t u = 0; u < k_; ++u) {
        if (u == v || image[u] < 0) continue;
        const bool edge_h = adj_[v] & (1U << u);
        const bool edge_img = adj_[static_cast<std::size_t>(image[v])] & (1U << image[u]);
        if (edge_h != edge_img) return false;
      }
      return true;
    };
    if (!consistent(from)) return false;
    for (std::size_t v = 0; v < k_; ++v)
      if ((fixed & (1U << v)) && !consistent(v)) return false;
    auto rec = [&](auto&& self, std::size_t v) -> bool {
      while (v < k_ && image[v] >= 0) ++v;
      if (v == k_) return true;
      for (std::size_t t = 0; t < k_; ++t) {
        if (used & (1U << t)) continue;
        if (std::popcount(adj_[t]) != std::popcount(adj_[v])) continue;
        image[v] = static_cast<int>(t);
        used |= 1U << t;
        if (consistent(v) && self(self, v + 1)) return true;
        used &= ~(1U << t);
        image[v] = -1;
      }
      return false;
    };
    return rec(rec, 0);
  }

  // Stabilizer-chain symmetry breaking: fix the first vertex with a
  // non-trivial orbit, require it to carry the smallest image in its orbit,
  // then recurse into its stabilizer.
  void build_symmetry_conditions() {
    std::uint32_t fixed = 0;
    for (;;) {
      bool progressed = false;
      for (std::size_t v = 0; v < k_ && !progressed; ++v) {
        if (fixed & (1U << v)) continue;
        std::vector<Vertex> orbit;
        for (std::size_t u = 0; u < k_; ++u)
          if (u != v && !(fixed & (1U << u)) &&
              automorphism_exists(fixed, static_cast<Vertex>(v), static_cast<Vertex>(u)))
            orbit.push_back(static_cast<Vertex>(u));
        if (orbit.empty()) continue;
        for (Vertex u : orbit) conditions_.emplace_back(static_cast<Vertex>(v), u);
        fixed |= 1U << v;
        progressed = true;
      }
      if (!progressed) break;
    }
  }

  template <typename Visit>
  bool run(const Plan& plan, const Query& q, std::optional<Vertex> root_image, Visit& visit) const {
    const Graph& g = *q.host;
    const std::size_t n = g.vertex_count();
    if (n < k_) return true;
    std::array<Vertex, kMax> image{};
    std::array<Vertex, kMax> witness{};

    auto feasible = [&](std::size_t i, Vertex c) {
      if (!q.allowed.empty() && !q.allowed[c]) return false;
      if (g.degree(c) < plan.degree[i]) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (image[j] == c) return false;
      if (q.break_symmetry)
        for (const auto& [j, greater] : plan.sym[i])
          if (greater ? !(c > image[j]) : !(c < image[j])) return false;
      for (auto j : plan.back[i])
        if (!g.has_edge(image[j], c)) return false;
      return true;
    };

    auto rec = [&](auto&& self, std::size_t i) -> bool {
      if (i == k_) {
        for (std::size_t j = 0; j < k_; ++j) witness[plan.order[j]] = image[j];
        return visit(std::span<const Vertex>(witness.data(), k_));
      }
      auto descend = [&](Vertex c) {
        if (!feasible(i, c)) return true;
        image[i] = c;
        return self(self, i + 1);
      };
      if (i == 0 && root_image) return descend(*root_image);
      if (!plan.back[i].empty()) {
        // Extend from the placed neighbor with the shortest adjacency list.
        auto anchor = plan.back[i][0];
        for (auto j : plan.back[i])
          if (g.degree(image[j]) < g.degree(image[anchor])) anchor = j;
        for (Vertex c : g.neighbors(image[anchor]))
          if (!descend(c)) return false;
        return true;
      }
      for (std::size_t c = 0; c < n; ++c)
        if (!descend(static_cast<Vertex>(c))) return false;
      return true;
    };
    return rec(rec, 0);
  }

  Graph pattern_;
  std::size_t k_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::pair<Vertex, Vertex>> conditions_;
  Plan global_plan_;
  std::vector<Plan> rooted_plans_;
};

inline void sort_copies(std::vector<Copy>& copies) { std::sort(copies.begin(), copies.end()); }

}  // namespace detail

/// All copies of h in g in lexicographic edge-image order. With a limit,
/// stops after `limit` copies and sets `truncated` if more exist.
inline CopyList enumerate_copies(const Graph& g, const Pattern& h, std::optional<std::size_t> limit = std::nullopt) {
  const detail::Embedder embedder(h.graph());
  CopyList out;
  embedder.for_each({&g}, [&](std::span<const Vertex> witness) {
    if (limit && out.copies.size() == *limit) {
      out.truncated = true;
      return false;
    }
    out.copies.emplace_back(std::vector<Vertex>(witness.begin(), witness.end()), h.graph());
    return true;
  });
  detail::sort_copies(out.copies);
  return out;
}

/// Copies whose vertex set contains w.
inline std::vector<Copy> copies_through(const Graph& g, const Pattern& h, Vertex w) {
  if (w >= g.vertex_count()) throw std::invalid_argument("copies_through: vertex out of range");
  const detail::Embedder embedder(h.graph());
  std::vector<Copy> out;
  embedder.for_each_through({&g}, w, [&](std::span<const Vertex> witness) {
    out.emplace_back(std::vector<Vertex>(witness.begin(), witness.end()), h.graph());
    return true;
  });
  detail::sort_copies(out);
  return out;
}

/// Copies containing w that meet x \ {w}.
inline std::vector<Copy> copies_meeting(const Graph& g, const Pattern& h, Vertex w, const VertexSet& x) {
  std::vector<Copy> out;
  for (auto& c : copies_through(g, h, w)) {
    const bool meets = std::any_of(c.vertices().begin(), c.vertices().end(),
                                   [&](Vertex v) { return v != w && x.contains(v); });
    if (meets) out.push_back(std::move(c));
  }
  return out;
}

/// Copies whose vertex set intersects x. Empty result certifies that x is
/// isolated from H.
inline std::vector<Copy> copies_meeting_set(const Graph& g, const Pattern& h, const VertexSet& x) {
  const detail::Embedder embedder(h.graph());
  std::vector<Copy> out;
  for (Vertex w : x) {
    if (w >= g.vertex_count()) throw std::invalid_argument("copies_meeting_set: vertex out of range");
    // Attribute each copy to its smallest member of x.
    embedder.for_each_through({&g}, w, [&](std::span<const Vertex> witness) {
      const bool earlier = std::any_of(witness.begin(), witness.end(),
                                       [&](Vertex v) { return v < w && x.contains(v); });
      if (!earlier) out.emplace_back(std::vector<Vertex>(witness.begin(), witness.end()), h.graph());
      return true;
    });
  }
  detail::sort_copies(out);
  return out;
}

}  // namespace packbench

#endif  // PACKBENCH_ENUMERATE_HPP
