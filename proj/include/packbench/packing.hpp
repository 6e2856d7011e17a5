#ifndef PACKBENCH_PACKING_HPP
#define PACKBENCH_PACKING_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "packbench/enumerate.hpp"
#include "packbench/graph.hpp"
#include "packbench/pattern.hpp"
#include "packbench/random.hpp"

namespace packbench {

/// Vertex-disjoint copies of H in a host on host_n vertices, plus the
/// uncovered vertices.
struct Packing {
  std::size_t host_n = 0;
  std::vector<Copy> copies;
  VertexSet leftover;

  /// Derives the leftover set from the copies.
  static Packing from_copies(std::size_t host_n, std::vector<Copy> copies) {
    std::vector<std::uint8_t> covered(host_n, 0);
    for (const Copy& c : copies)
      for (Vertex v : c.vertices())
        if (v < host_n) covered[v] = 1;
    std::vector<Vertex> rest;
    for (std::size_t v = 0; v < host_n; ++v)
      if (!covered[v]) rest.push_back(static_cast<Vertex>(v));
    Packing pk;
    pk.host_n = host_n;
    pk.copies = std::move(copies);
    pk.leftover = VertexSet(std::move(rest), host_n);
    return pk;
  }

  friend bool operator==(const Packing&, const Packing&) = default;
};

inline std::size_t leftover_count(const Packing& pk) { return pk.leftover.size(); }

struct OracleConfig {
  std::uint64_t seed = 0;
  /// Random-order greedy restarts; the best is kept.
  std::size_t sweeps = 4;
  /// Local-search step limit (0 disables local search).
  std::size_t swap_budget = 500;
  /// Worker threads for restart sweeps.
  unsigned threads = 1;
};

inline void validate(const OracleConfig& cfg) {
  if (cfg.sweeps < 1) throw std::invalid_argument("OracleConfig: sweeps must be >= 1");
}

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers; results land in
// index order so the outcome never depends on scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(count);
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) results[i] = fn(i);
    });
  for (auto& t : pool) t.join();
  return results;
}

// Adds copies among vertices still marked free, scanning `order`.
inline void greedy_fill(const Graph& g, const Embedder& embedder, std::span<const Vertex> order,
                        std::vector<std::uint8_t>& free, std::vector<Copy>& copies) {
  const Embedder::Query q{&g, free, false};
  for (Vertex v : order) {
    if (!free[v]) continue;
    if (auto witness = embedder.find_through(q, v)) {
      for (Vertex u : *witness) free[u] = 0;
      copies.emplace_back(std::move(*witness), embedder.pattern());
    }
  }
}

inline Packing greedy_sweep(const Graph& g, const Embedder& embedder, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  Rng rng(seed);
  shuffle(std::span<Vertex>(order), rng);
  std::vector<std::uint8_t> free(n, 1);
  std::vector<Copy> copies;
  greedy_fill(g, embedder, order, free, copies);
  return Packing::from_copies(n, std::move(copies));
}

}  // namespace detail

/// Randomized greedy: each sweep scans vertices in a seeded random order and
/// embeds the first copy found through every still-uncovered vertex. The
/// result of one sweep is maximal. Returns the sweep with the smallest
/// leftover, ties broken by the smaller sub-seed.
inline Packing greedy_pack(const Graph& g, const Pattern& h, const OracleConfig& cfg) {
  validate(cfg);
  const detail::Embedder embedder(h.graph());
  auto sweeps = detail::parallel_map(cfg.sweeps, cfg.threads, [&](std::size_t s) {
    const auto sub_seed = derive_seed(cfg.seed, s);
    return std::pair{sub_seed, detail::greedy_sweep(g, embedder, sub_seed)};
  });
  auto best = std::min_element(sweeps.begin(), sweeps.end(), [](const auto& a, const auto& b) {
    return std::pair{leftover_count(a.second), a.first} < std::pair{leftover_count(b.second), b.first};
  });
  return std::move(best->second);
}

/// Swap local search. One step tries to remove a single copy and re-embed two
/// disjoint copies on the freed vertices plus the leftover. Uncovered copies
/// are first added greedily. Never increases the leftover.
inline Packing local_search_improve(const Graph& g, const Pattern& h, const Packing& pk, const OracleConfig& cfg) {
  if (cfg.swap_budget == 0 || pk.leftover.empty()) return pk;
  const std::size_t n = g.vertex_count();
  const detail::Embedder embedder(h.graph());
  const bool connected = component_count(h.graph()) == 1;
  constexpr std::size_t kFirstCopyCandidates = 256;

  std::vector<Copy> copies = pk.copies;
  std::vector<std::uint8_t> free = pk.leftover.mask(n);
  std::vector<Vertex> leftover(pk.leftover.begin(), pk.leftover.end());
  auto refresh_leftover = [&] {
    leftover.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (free[v]) leftover.push_back(static_cast<Vertex>(v));
  };
  detail::greedy_fill(g, embedder, leftover, free, copies);
  refresh_leftover();

  Rng rng(derive_seed(cfg.seed, 0x5a5a));
  std::size_t steps = 0;
  while (steps < cfg.swap_budget && !leftover.empty()) {
    std::vector<std::size_t> order(copies.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(order), rng);
    bool improved = false;
    for (std::size_t idx : order) {
      if (steps >= cfg.swap_budget) break;
      ++steps;
      const Copy removed = copies[idx];
      if (connected) {
        // A new copy must join a freed vertex to a leftover one.
        bool touches = false;
        for (Vertex v : removed.vertices()) {
          for (Vertex u : g.neighbors(v))
            if (free[u]) {
              touches = true;
              break;
            }
          if (touches) break;
        }
        if (!touches) continue;
      }
      for (Vertex v : removed.vertices()) free[v] = 1;
      std::optional<std::vector<Vertex>> first;
      std::optional<std::vector<Vertex>> second;
      std::size_t tried = 0;
      const detail::Embedder::Query pool{&g, free, true};
      for (Vertex t : removed.vertices()) {
        if (second || tried >= kFirstCopyCandidates) break;
        embedder.for_each_through(pool, t, [&](std::span<const Vertex> c1) {
          ++tried;
          for (Vertex u : c1) free[u] = 0;
          const detail::Embedder::Query rest{&g, free, false};
          for (Vertex t2 : removed.vertices()) {
            if (!free[t2]) continue;
            if (auto c2 = embedder.find_through(rest, t2)) {
              first.emplace(c1.begin(), c1.end());
              second = std::move(c2);
              break;
            }
          }
          for (Vertex u : c1) free[u] = 1;
          return !second && tried < kFirstCopyCandidates;
        });
      }
      if (!second) {
        for (Vertex v : removed.vertices()) free[v] = 0;
        continue;
      }
      for (Vertex u : *first) free[u] = 0;
      for (Vertex u : *second) free[u] = 0;
      copies[idx] = Copy(std::move(*first), h.graph());
      copies.emplace_back(std::move(*second), h.graph());
      refresh_leftover();
      detail::greedy_fill(g, embedder, leftover, free, copies);
      refresh_leftover();
      improved = true;
      break;
    }
    if (!improved) break;
  }
  return Packing::from_copies(n, std::move(copies));
}

/// The packing oracle contract: graph and pattern in, packing out.
template <typename O>
concept PackingOracle = requires(const O& oracle, const Graph& g, const Pattern& h, const OracleConfig& cfg) {
  { oracle(g, h, cfg) } -> std::convertible_to<Packing>;
};

/// Greedy restarts followed by swap local search.
struct HeuristicOracle {
  Packing operator()(const Graph& g, const Pattern& h, const OracleConfig& cfg) const {
    return local_search_improve(g, h, greedy_pack(g, h, cfg), cfg);
  }
};

/// Maximum packing by exhaustive search; only for tiny hosts.
inline Packing exact_max_packing(const Graph& g, const Pattern& h) {
  const std::size_t n = g.vertex_count();
  if (n > 16) throw std::invalid_argument("exact_max_packing: host too large");
  auto all = enumerate_copies(g, h).copies;
  std::vector<std::uint32_t> masks;
  masks.reserve(all.size());
  for (const Copy& c : all) {
    std::uint32_t m = 0;
    for (Vertex v : c.vertices()) m |= 1U << v;
    masks.push_back(m);
  }
  const std::size_t k = h.vertex_count();
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  // Branch on the lowest undecided vertex: leave it uncovered, or cover it
  // by a copy whose lowest vertex it is.
  auto rec = [&](auto&& self, std::size_t v, std::uint32_t used, std::size_t skipped) -> void {
    const std::size_t remaining = n - static_cast<std::size_t>(std::popcount(used)) - skipped;
    if (chosen.size() + remaining / k <= best.size()) return;
    while (v < n && (used & (1U << v))) ++v;
    if (v == n) {
      if (chosen.size() > best.size()) best = chosen;
      return;
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].vertices().front() != v || (masks[i] & used)) continue;
      chosen.push_back(i);
      self(self, v + 1, used | masks[i], skipped);
      chosen.pop_back();
    }
    self(self, v + 1, used, skipped + 1);
  };
  rec(rec, 0, 0, 0);
  std::vector<Copy> copies;
  for (auto i : best) copies.push_back(all[i]);
  return Packing::from_copies(n, std::move(copies));
}

struct ExactOracle {
  Packing operator()(const Graph& g, const Pattern& h, const OracleConfig&) const { return exact_max_packing(g, h); }
};

struct PackingVerdict {
  bool accepted = true;
  /// Violation class: "host size", "witness", "missing edge", "disjointness", "leftover".
  std::string violation;
  std::string detail;

  explicit operator bool() const noexcept { return accepted; }
};

/// Independent checker; reports the first violation found.
inline PackingVerdict verify_packing(const Graph& g, const Pattern& h, const Packing& pk) {
  auto reject = [](std::string what, std::string detail) { return PackingVerdict{false, std::move(what), std::move(detail)}; };
  const std::size_t n = g.vertex_count();
  if (pk.host_n != n) return reject("host size", "packing built for " + std::to_string(pk.host_n) + " vertices, host has " + std::to_string(n));
  std::vector<std::int64_t> owner(n, -1);
  for (std::size_t i = 0; i < pk.copies.size(); ++i) {
    auto witness = pk.copies[i].witness();
    if (witness.size() != h.vertex_count()) return reject("witness", "copy " + std::to_string(i) + " has wrong size");
    for (std::size_t a = 0; a < witness.size(); ++a) {
      if (witness[a] >= n) return reject("witness", "copy " + std::to_string(i) + " maps outside the host");
      for (std::size_t b = a + 1; b < witness.size(); ++b)
        if (witness[a] == witness[b]) return reject("witness", "copy " + std::to_string(i) + " is not injective");
    }
    for (const Edge& e : h.graph().edges())
      if (!g.has_edge(witness[e.u], witness[e.v]))
        return reject("missing edge", "copy " + std::to_string(i) + " uses non-edge {" + std::to_string(witness[e.u]) + "," +
                                          std::to_string(witness[e.v]) + "}");
    for (Vertex v : witness) {
      if (owner[v] >= 0)
        return reject("disjointness", "vertex " + std::to_string(v) + " in copies " + std::to_string(owner[v]) + " and " + std::to_string(i));
      owner[v] = static_cast<std::int64_t>(i);
    }
  }
  std::vector<Vertex> uncovered;
  for (std::size_t v = 0; v < n; ++v)
    if (owner[v] < 0) uncovered.push_back(static_cast<Vertex>(v));
  if (!std::equal(uncovered.begin(), uncovered.end(), pk.leftover.begin(), pk.leftover.end()))
    return reject("leftover", "leftover set does not match the uncovered vertices");
  if (pk.leftover.size() != n - h.vertex_count() * pk.copies.size())
    return reject("leftover", "leftover size is not host_n - v(H) * copies");
  return {};
}

}  // namespace packbench

#endif  // PACKBENCH_PACKING_HPP
