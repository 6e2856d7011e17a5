#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "packbench/packing.hpp"

namespace packbench {
namespace {

Graph two_triangles() { return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

OracleConfig config(std::uint64_t seed, std::size_t sweeps = 4, std::size_t budget = 500) {
  OracleConfig cfg;
  cfg.seed = seed;
  cfg.sweeps = sweeps;
  cfg.swap_budget = budget;
  return cfg;
}

bool leftover_has_copy(const Graph& g, const Pattern& h, const Packing& pk) {
  return enumerate_copies(induced_subgraph(g, pk.leftover).graph, h, 0).truncated;
}

TEST(GreedyPack, CompleteSixHasNoLeftover) {
  // Every maximal triangle packing of K6 has two copies.
  EXPECT_EQ(oracle::maximal_packing_sizes(complete_graph(6), complete_graph(3)), (std::set<std::size_t>{2}));
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_EQ(leftover_count(greedy_pack(complete_graph(6), complete_pattern(3), config(seed, 1))), 0u);
}

TEST(GreedyPack, Examples) {
  EXPECT_EQ(leftover_count(greedy_pack(cycle_graph(5), complete_pattern(3), config(1))), 5u);
  const auto pk = greedy_pack(two_triangles(), complete_pattern(3), config(1));
  EXPECT_EQ(leftover_count(pk), 0u);
  EXPECT_EQ(pk.copies.size(), 2u);
}

TEST(GreedyPack, VerifiesMaximalAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = gnp_generate({80, 0.15, seed});
    for (const auto& h : {complete_pattern(3), cycle_pattern(4), complete_pattern(4)}) {
      const auto pk = greedy_pack(g, h, config(seed));
      EXPECT_TRUE(verify_packing(g, h, pk)) << verify_packing(g, h, pk).detail;
      EXPECT_FALSE(leftover_has_copy(g, h, pk));
      EXPECT_EQ(pk, greedy_pack(g, h, config(seed)));
    }
  }
}

TEST(GreedyPack, ThreadCountDoesNotChangeResult) {
  const auto g = gnp_generate({120, 0.1, 3});
  auto cfg = config(9, 6);
  const auto serial = greedy_pack(g, complete_pattern(3), cfg);
  cfg.threads = 4;
  EXPECT_EQ(greedy_pack(g, complete_pattern(3), cfg), serial);
}

TEST(GreedyPack, BestSweepIsNoWorseThanSingleSweep) {
  const auto g = gnp_generate({150, 0.08, 21});
  const auto many = greedy_pack(g, complete_pattern(3), config(4, 8));
  const auto one = greedy_pack(g, complete_pattern(3), config(4, 1));
  EXPECT_LE(leftover_count(many), leftover_count(one));
}

TEST(LocalSearch, ZeroBudgetReturnsInput) {
  const auto g = gnp_generate({60, 0.15, 2});
  const auto pk = greedy_pack(g, complete_pattern(3), config(2, 1));
  EXPECT_EQ(local_search_improve(g, complete_pattern(3), pk, config(2, 1, 0)), pk);
}

TEST(LocalSearch, PerfectPackingUnchanged) {
  const auto g = complete_graph(9);
  const auto pk = greedy_pack(g, complete_pattern(3), config(0));
  ASSERT_EQ(leftover_count(pk), 0u);
  EXPECT_EQ(local_search_improve(g, complete_pattern(3), pk, config(0)), pk);
}

TEST(LocalSearch, CompletesNineVertexCliqueFromOneCopy) {
  const auto g = complete_graph(9);
  const auto h = complete_pattern(3);
  const auto start = Packing::from_copies(9, {Copy({0, 1, 2}, h.graph())});
  const auto improved = local_search_improve(g, h, start, config(0, 1, 50));
  EXPECT_EQ(improved.copies.size(), 3u);
  EXPECT_EQ(leftover_count(improved), 0u);
  EXPECT_TRUE(verify_packing(g, h, improved));
}

TEST(LocalSearch, SwapMoveFindsTwoCopiesWhereOneBlocks) {
  // {2,3,4} blocks both {0,1,2} and {3,4,5}, which together cover the host.
  const auto g = Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}, {2, 4}});
  const auto h = complete_pattern(3);
  const auto blocked = Packing::from_copies(6, {Copy({2, 3, 4}, h.graph())});
  ASSERT_TRUE(verify_packing(g, h, blocked));
  const auto improved = local_search_improve(g, h, blocked, config(5, 1, 10));
  EXPECT_EQ(leftover_count(improved), 0u);
  EXPECT_TRUE(verify_packing(g, h, improved));
}

TEST(LocalSearch, NeverIncreasesLeftover) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gnp_generate({100, 0.1, seed + 40});
    for (const auto& h : {complete_pattern(3), cycle_pattern(4)}) {
      const auto before = greedy_pack(g, h, config(seed, 1));
      const auto after = local_search_improve(g, h, before, config(seed, 1, 200));
      EXPECT_LE(leftover_count(after), leftover_count(before));
      EXPECT_TRUE(verify_packing(g, h, after));
    }
  }
}

TEST(VerifyPacking, RejectsSharedVertex) {
  const auto h = complete_pattern(3);
  const auto pk = Packing::from_copies(6, {Copy({0, 1, 2}, h.graph()), Copy({2, 3, 4}, h.graph())});
  const auto verdict = verify_packing(complete_graph(6), h, pk);
  EXPECT_FALSE(verdict);
  EXPECT_EQ(verdict.violation, "disjointness");
}

TEST(VerifyPacking, RejectsStalePackingAfterDeletion) {
  const auto h = complete_pattern(3);
  const auto k4 = complete_graph(4);
  const auto pk = greedy_pack(k4, h, config(0));
  ASSERT_EQ(pk.copies.size(), 1u);
  const auto w = pk.copies.front().witness();
  const auto damaged = delete_edges(k4, std::vector<Edge>{Edge(w[0], w[1])});
  const auto verdict = verify_packing(damaged, h, pk);
  EXPECT_FALSE(verdict);
  EXPECT_EQ(verdict.violation, "missing edge");
}

TEST(VerifyPacking, RejectsWrongHostAndLeftover) {
  const auto h = complete_pattern(3);
  auto pk = Packing::from_copies(6, {Copy({0, 1, 2}, h.graph())});
  EXPECT_EQ(verify_packing(complete_graph(7), h, pk).violation, "host size");
  pk.leftover = VertexSet({3, 4}, 6);
  EXPECT_EQ(verify_packing(complete_graph(6), h, pk).violation, "leftover");
}

TEST(LeftoverCount, Examples) {
  const auto h = complete_pattern(3);
  EXPECT_EQ(leftover_count(Packing::from_copies(6, {Copy({0, 1, 2}, h.graph()), Copy({3, 4, 5}, h.graph())})), 0u);
  EXPECT_EQ(leftover_count(Packing::from_copies(10, {})), 10u);
  EXPECT_EQ(leftover_count(Packing::from_copies(10, {Copy({0, 1, 2}, h.graph()), Copy({5, 6, 7}, h.graph())})), 4u);
}

TEST(ExactPacking, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 6;
    const auto g = oracle::random_small_graph(n, 0.6, rng);
    for (const auto& h : {complete_pattern(3), cycle_pattern(4)}) {
      const auto pk = exact_max_packing(g, h);
      EXPECT_TRUE(verify_packing(g, h, pk));
      EXPECT_EQ(pk.copies.size(), oracle::max_packing_size(g, h.graph()));
      EXPECT_GE(pk.copies.size(), greedy_pack(g, h, config(static_cast<std::uint64_t>(trial))).copies.size());
    }
  }
}

TEST(ExactPacking, HeuristicNeverBeatsOptimum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_small_graph(12, 0.5, rng);
    const auto h = complete_pattern(3);
    const auto best = ExactOracle{}(g, h, {});
    const auto heuristic = HeuristicOracle{}(g, h, config(static_cast<std::uint64_t>(trial)));
    EXPECT_GE(leftover_count(heuristic), leftover_count(best));
  }
}

}  // namespace
}  // namespace packbench
