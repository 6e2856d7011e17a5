#ifndef PACKBENCH_GRAPH_HPP
#define PACKBENCH_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "packbench/random.hpp"

namespace packbench {

using Vertex = std::uint32_t;

/// Unordered vertex pair, stored normalized with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;

  [[nodiscard]] bool touches(Vertex w) const noexcept { return u == w || v == w; }
};

/// Sorted, duplicate-free set of vertex ids valid for a host of size n.
class VertexSet {
 public:
  VertexSet() = default;

  /// Sorts and validates; throws std::invalid_argument on duplicates or ids >= n.
  VertexSet(std::vector<Vertex> members, std::size_t n) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw std::invalid_argument("VertexSet: duplicate vertex id");
    if (!members_.empty() && members_.back() >= n)
      throw std::invalid_argument("VertexSet: vertex id out of range");
  }

  static VertexSet range(std::size_t n) {
    std::vector<Vertex> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Vertex>(i);
    VertexSet s;
    s.members_ = std::move(all);
    return s;
  }

  [[nodiscard]] std::span<const Vertex> members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
  [[nodiscard]] bool contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
  [[nodiscard]] auto end() const noexcept { return members_.end(); }

  /// Byte mask of length n with 1 at members.
  [[nodiscard]] std::vector<std::uint8_t> mask(std::size_t n) const {
    std::vector<std::uint8_t> m(n, 0);
    for (Vertex v : members_) m[v] = 1;
    return m;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

/// Simple undirected graph on vertices {0, ..., n-1}. Immutable once built.
///
/// Edges are kept as a sorted edge list (membership, iteration in
/// lexicographic order) and as CSR neighbor lists sorted ascending.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), offsets_(n + 1, 0) {}

  /// Builds from an edge list. Throws std::invalid_argument on self-loops,
  /// duplicate edges or out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
    for (const Edge& e : edges) {
      if (e.u == e.v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(e.u));
      if (e.v >= n) throw std::invalid_argument("Graph: edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end())
      throw std::invalid_argument("Graph: duplicate edge {" + std::to_string(it->u) + "," +
                                  std::to_string(it->v) + "}");
    return from_sorted_unique(n, std::move(edges));
  }

  [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  [[nodiscard]] bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    if (degree(a) > degree(b)) std::swap(a, b);
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  friend bool operator==(const Graph& x, const Graph& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_;
  }

  /// Trusted constructor: edges must already be normalized, sorted, unique
  /// and in range.
  static Graph from_sorted_unique(std::size_t n, std::vector<Edge> edges) {
    Graph g(n);
    g.edges_ = std::move(edges);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic edge order yields ascending neighbor lists in one pass:
    // for vertex w, neighbors u < w arrive (as e.v == w) before any v > w.
    for (const Edge& e : g.edges_) {
      g.adjacency_[fill[e.u]++] = e.v;
      g.adjacency_[fill[e.v]++] = e.u;
    }
    return g;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
};

struct GnpConfig {
  std::size_t n = 1;
  double p = 0.0;
  std::uint64_t seed = 0;
};

inline Graph gnp_generate_impl(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
  edges.reserve(static_cast<std::size_t>(pairs * p * 1.05) + 16);
  // One draw per pair in lexicographic order; keeps the stream fixed.
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (unit_real(rng) < p) edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return Graph::from_sorted_unique(n, std::move(edges));
}

/// Binomial random graph G(n, p), a pure function of cfg.
inline Graph gnp_generate(const GnpConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("gnp_generate: n must be >= 1");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("gnp_generate: p must lie in [0,1]");
  if (cfg.n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("gnp_generate: n too large");
  return gnp_generate_impl(cfg.n, cfg.p, cfg.seed);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return Graph::from_edges(n, std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>((u + 1) % n));
  return Graph::from_edges(n, std::move(edges));
}

inline std::size_t min_degree(const Graph& g) {
  if (g.vertex_count() == 0) throw std::invalid_argument("min_degree: empty graph");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) best = std::min(best, g.degree(static_cast<Vertex>(v)));
  return best;
}

/// |N(v) ∩ s|; v itself never counts.
inline std::size_t degree_into(const Graph& g, Vertex v, const VertexSet& s) {
  auto nb = g.neighbors(v);
  auto members = s.members();
  std::size_t count = 0;
  // Merge-intersect two sorted lists; v is never in N(v).
  auto a = nb.begin();
  auto b = members.begin();
  while (a != nb.end() && b != members.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

/// Degree of v into a byte mask over the host vertices.
inline std::size_t degree_into_mask(const Graph& g, Vertex v, std::span<const std::uint8_t> mask) {
  std::size_t count = 0;
  for (Vertex u : g.neighbors(v)) count += mask[u] ? 1 : 0;
  return count;
}

/// G[S] relabeled to {0, ..., |S|-1} in the order of S; to_host maps back.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_host;
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  const std::size_t n = g.vertex_count();
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> to_local(n, kAbsent);
  std::vector<Vertex> to_host(s.members().begin(), s.members().end());
  for (std::size_t i = 0; i < to_host.size(); ++i) to_local[to_host[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < to_host.size(); ++i) {
    for (Vertex w : g.neighbors(to_host[i])) {
      const Vertex j = to_local[w];
      if (j != kAbsent && j > i) edges.emplace_back(static_cast<Vertex>(i), j);
    }
  }
  // Local ids follow host order and neighbor lists are sorted, so the list
  // is already lexicographic.
  return {Graph::from_sorted_unique(to_host.size(), std::move(edges)), std::move(to_host)};
}

/// Removes the given edges. Throws std::invalid_argument if any removal is
/// not an edge of g (or is listed twice).
inline Graph delete_edges(const Graph& g, std::span<const Edge> removals) {
  std::vector<Edge> drop(removals.begin(), removals.end());
  std::sort(drop.begin(), drop.end());
  if (std::adjacent_find(drop.begin(), drop.end()) != drop.end())
    throw std::invalid_argument("delete_edges: edge listed twice");
  for (const Edge& e : drop)
    if (e.v >= g.vertex_count() || !g.has_edge(e.u, e.v))
      throw std::invalid_argument("delete_edges: {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  "} is not an edge");
  std::vector<Edge> kept;
  kept.reserve(g.edge_count() - drop.size());
  std::set_difference(g.edges().begin(), g.edges().end(), drop.begin(), drop.end(), std::back_inserter(kept));
  return Graph::from_sorted_unique(g.vertex_count(), std::move(kept));
}

/// Adds edges (used to undo deletions in tests and tools).
inline Graph add_edges(const Graph& g, std::span<const Edge> additions) {
  std::vector<Edge> all(g.edges().begin(), g.edges().end());
  all.insert(all.end(), additions.begin(), additions.end());
  return Graph::from_edges(g.vertex_count(), std::move(all));
}

// Edge-list text format: "n m" on the first line, then m lines "u v" with
// u < v, 0-based ids.

class EdgeListError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Graph read_edge_list(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw EdgeListError("edge list: malformed header, expected \"n m\"");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v)) throw EdgeListError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    if (u < 0 || v < 0 || u >= n || v >= n) throw EdgeListError("edge list: vertex id out of range on edge " + std::to_string(i));
    if (u == v) throw EdgeListError("edge list: self-loop at vertex " + std::to_string(u));
    if (u > v) throw EdgeListError("edge list: expected u < v on edge " + std::to_string(i));
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::string trailing;
  if (in >> trailing) throw EdgeListError("edge list: trailing data after " + std::to_string(m) + " edges");
  try {
    return Graph::from_edges(static_cast<std::size_t>(n), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw EdgeListError(std::string("edge list: ") + e.what());
  }
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace packbench

#endif  // PACKBENCH_GRAPH_HPP
