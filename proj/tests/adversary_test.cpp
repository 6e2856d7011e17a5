#include <cmath>

#include <gtest/gtest.h>

#include "packbench/adversary.hpp"

namespace packbench {
namespace {

AdversaryConfig with_x(std::size_t x_size, std::uint64_t seed) {
  AdversaryConfig cfg;
  cfg.x_override = x_size;
  cfg.seed = seed;
  return cfg;
}

TEST(IsolatedSetSize, Examples) {
  // Triangle: n-independent c p^-2.
  EXPECT_EQ(isolated_set_size(1000, 0.1, complete_pattern(3), 0.5), 50u);
  EXPECT_EQ(isolated_set_size(1000000, 0.1, complete_pattern(3), 0.5), 50u);
  EXPECT_EQ(isolated_set_size(10000, 1e-2, cycle_pattern(4), 1.0), 100u);
  EXPECT_EQ(isolated_set_size(10000, 1e-2, cycle_pattern(4), 1e-12), 0u);
  // Capped at n.
  EXPECT_EQ(isolated_set_size(50, 0.01, complete_pattern(3), 1.0), 50u);
}

TEST(CycleLowerBound, Examples) {
  EXPECT_EQ(cycle_lower_bound(3, 100, 0.1, 0.25), 25u);
  EXPECT_EQ(cycle_lower_bound(3, 10, 0.1, 0.25), 10u);
  EXPECT_EQ(cycle_lower_bound(4, 10000, 1e-2, 1.0), 100u);
  EXPECT_EQ(cycle_lower_bound(5, 10000, 1e-1, 1.0), 0u);
  EXPECT_THROW(cycle_lower_bound(2, 10, 0.1, 1.0), std::invalid_argument);
}

TEST(CliqueLowerBound, SingleTermEqualsTriangle) {
  const auto b = clique_lower_bound(3, 500, 0.2, 0.3);
  EXPECT_EQ(b.argmax, 3u);
  EXPECT_EQ(b.count, static_cast<std::uint64_t>(std::floor(0.3 / 0.04 + 1e-9)));
}

TEST(CliqueLowerBound, CrossoverAtCubeRoot) {
  // l = 4 beats l = 3 exactly when n p^3 <= 1, i.e. p <= n^(-1/3) = 0.01.
  const std::size_t n = 1000000;
  for (double p : {0.011, 0.02, 0.05, 0.2}) EXPECT_EQ(clique_lower_bound(4, n, p, 0.1).argmax, 3u) << p;
  for (double p : {0.009, 0.005, 0.002}) EXPECT_EQ(clique_lower_bound(4, n, p, 0.1).argmax, 4u) << p;
}

TEST(CliqueLowerBound, FourCliqueTermBelowCrossover) {
  const double p = std::pow(10.0, -2.5);
  const auto b = clique_lower_bound(4, 1000000, p, 0.1);
  EXPECT_EQ(b.argmax, 4u);
  EXPECT_EQ(b.count, static_cast<std::uint64_t>(std::floor(0.1 / (1e6 * std::pow(p, 5)))));
  EXPECT_GT(b.value, 0.1 / (p * p));
}

TEST(CliqueLowerBound, ConsistentWithCycleSpecialization) {
  for (double p : {0.05, 0.1, 0.3})
    for (std::size_t t = 3; t <= 6; ++t)
      EXPECT_GE(clique_lower_bound(t, 200, p, 0.5).count, cycle_lower_bound(3, 1000000, p, 0.5));
}

TEST(AdversaryConstruct, EmptyXLeavesGraphUnchanged) {
  const auto g = gnp_generate({80, 0.2, 1});
  const auto out = adversary_construct(g, complete_pattern(3), 0.2, with_x(0, 1));
  EXPECT_EQ(out.degraded, g);
  EXPECT_TRUE(out.deleted.empty());
  EXPECT_TRUE(verify_isolation(out, complete_pattern(3)));
}

TEST(AdversaryConstruct, SingleTriangleHandTrace) {
  const auto out = adversary_construct(complete_graph(3), complete_pattern(3), 1.0, VertexSet({0}, 3), AdversaryConfig{});
  ASSERT_EQ(out.deleted.size(), 1u);
  EXPECT_EQ(out.deleted.front().edge, Edge(1, 2));
  EXPECT_EQ(out.deleted.front().x_hits, 1u);
  EXPECT_EQ(out.min_degree_before, 2u);
  EXPECT_EQ(out.min_degree_after, 1u);
}

TEST(AdversaryConstruct, TwoHitsDeleteFirstEdge) {
  const auto out = adversary_construct(complete_graph(3), complete_pattern(3), 1.0, VertexSet({1, 2}, 3), AdversaryConfig{});
  ASSERT_EQ(out.deleted.size(), 1u);
  EXPECT_EQ(out.deleted.front().edge, Edge(0, 1));
}

TEST(AdversaryConstruct, IsolationAndAccountingProperties) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const double p = 0.2;
    const auto g = gnp_generate({120, p, seed});
    for (const auto& h : {complete_pattern(3), cycle_pattern(4), cycle_pattern(5)}) {
      const auto out = adversary_construct(g, h, p, with_x(6, seed));
      EXPECT_EQ(out.x.size(), 6u);
      EXPECT_TRUE(verify_isolation(out, h));
      EXPECT_EQ(out.degraded.edge_count() + out.deleted.size(), g.edge_count());
      std::vector<std::size_t> counted(g.vertex_count(), 0);
      for (const auto& d : out.deleted) {
        EXPECT_TRUE(g.has_edge(d.edge.u, d.edge.v));
        EXPECT_FALSE(out.degraded.has_edge(d.edge.u, d.edge.v));
        EXPECT_TRUE(d.killed.contains(d.edge.u) && d.killed.contains(d.edge.v));
        if (d.x_hits == 1) EXPECT_FALSE(out.x.contains(d.edge.u) || out.x.contains(d.edge.v));
        else EXPECT_GE(d.x_hits, 2u);
        ++counted[d.edge.u];
        ++counted[d.edge.v];
      }
      EXPECT_EQ(counted, out.per_vertex_deletions);
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto meeting = copies_meeting(g, h, v, out.x).size();
        EXPECT_LE(out.per_vertex_deletions[v], meeting);
        EXPECT_EQ(out.xw_counts[v], meeting);
      }
    }
  }
}

TEST(AdversaryConstruct, DeterministicAndSeededX) {
  const auto g = gnp_generate({100, 0.2, 4});
  const auto a = adversary_construct(g, complete_pattern(3), 0.2, with_x(10, 7));
  const auto b = adversary_construct(g, complete_pattern(3), 0.2, with_x(10, 7));
  const auto c = adversary_construct(g, complete_pattern(3), 0.2, with_x(10, 8));
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.degraded, b.degraded);
  EXPECT_NE(a.x, c.x);
}

TEST(AdversaryConstruct, DefaultXFromIsolatedSetSize) {
  const auto g = gnp_generate({200, 0.2, 2});
  AdversaryConfig cfg;
  cfg.c = 0.4;
  const auto out = adversary_construct(g, complete_pattern(3), 0.2, cfg);
  EXPECT_EQ(out.x.size(), 10u);
  EXPECT_DOUBLE_EQ(out.c, 0.4);
}

TEST(AdversaryConfig, DefaultConstant) {
  // Triangle: min(eps, 18^-6).
  EXPECT_DOUBLE_EQ(default_c(complete_pattern(3), 0.2), std::pow(18.0, -6.0));
  EXPECT_DOUBLE_EQ(default_c(complete_pattern(3), 1e-9), 1e-9);
  AdversaryConfig bad;
  bad.epsilon = 0.0;
  EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(VerifyIsolation, RejectsWhenLastDeletionIsUndone) {
  const auto g = gnp_generate({60, 0.3, 5});
  const auto h = complete_pattern(3);
  auto out = adversary_construct(g, h, 0.3, with_x(5, 5));
  ASSERT_FALSE(out.deleted.empty());
  ASSERT_TRUE(verify_isolation(out, h));
  const Edge last = out.deleted.back().edge;
  out.degraded = add_edges(out.degraded, std::vector<Edge>{last});
  const auto verdict = verify_isolation(out, h);
  EXPECT_FALSE(verdict);
  EXPECT_GE(verdict.copies_found, 1u);
}

TEST(VerifyIsolation, EmptyGraphAccepts) {
  AdversaryOutcome out;
  out.degraded = Graph(10);
  out.x = VertexSet::range(10);
  EXPECT_TRUE(verify_isolation(out, complete_pattern(3)));
}

TEST(KimVu, TriangleExponentTable) {
  const auto r = kimvu_report(complete_pattern(3), 10000, 0.05, 20);
  ASSERT_EQ(r.ei_exponents.size(), 3u);
  EXPECT_EQ(r.ei_exponents[0], Rational(1));
  EXPECT_EQ(r.ei_exponents[1], Rational(1, 2));
  EXPECT_EQ(r.ei_exponents[2], Rational(0));
  EXPECT_DOUBLE_EQ(r.ei_bounds[0], 10000 * 0.05 * 0.05);
  EXPECT_DOUBLE_EQ(r.ei_bounds[1], 100 * 0.05);
  EXPECT_DOUBLE_EQ(r.ei_bounds[2], 1.0);
  EXPECT_DOUBLE_EQ(r.eprime, std::max({r.ei_bounds[0], r.ei_bounds[1], r.ei_bounds[2]}));
  EXPECT_EQ(r.k, 3u);
  EXPECT_NEAR(r.lambda, 2 * std::log(10000.0), 1e-12);
  EXPECT_NEAR(r.dk, 2 * std::exp(2.0), 1e-12);
  EXPECT_NEAR(r.ak, 512 * std::sqrt(6.0), 1e-9);
}

TEST(KimVu, ExponentsFollowRationalDensity) {
  for (const auto& h : {cycle_pattern(4), cycle_pattern(5), complete_pattern(4), complete_pattern(5)}) {
    const auto r = kimvu_report(h, 5000, 0.1, 3);
    const Rational m2 = pattern_params(h).m2;
    for (std::size_t i = 1; i <= h.edge_count(); ++i)
      EXPECT_EQ(r.ei_exponents[i - 1],
                Rational(static_cast<std::int64_t>(h.vertex_count()) - 2) - Rational(static_cast<std::int64_t>(i) - 1) / m2);
  }
}

TEST(KimVu, EmptyXIsInfeasible) {
  const auto r = kimvu_report(complete_pattern(3), 1000, 0.1, 0);
  EXPECT_EQ(r.e0, 0.0);
  EXPECT_FALSE(r.feasible);
}

TEST(KimVu, FeasibilityMatchesThreshold) {
  for (double p : {1e-3, 1e-2, 0.1, 0.5}) {
    const auto r = kimvu_report(complete_pattern(3), 100000, p, 1e6);
    EXPECT_EQ(r.feasible, r.ratio >= r.ratio_threshold);
    EXPECT_NEAR(r.ratio, std::sqrt(r.e0 / r.eprime), 1e-9 * r.ratio);
  }
}

TEST(KimVu, ChainHoldsAtUpperCap) {
  // At the window's upper cap with c <= (2 e v)^(-2e), |X| p v^-v clears the
  // (2 e ln n)^(2e) threshold.
  const std::size_t n = 1000000;
  const auto h = complete_pattern(3);
  const double c = std::pow(18.0, -6.0);
  const double p = deletion_window(h, n, c).upper;
  const double x = detail::isolated_set_value(3, 3, n, p, c);
  const auto r = kimvu_report(h, n, p, x);
  EXPECT_GE(r.ratio_lower, r.ratio_threshold);
  const double expected = std::pow(std::log(1e6), 6.0) / c;
  EXPECT_NEAR(x * p, expected, 1e-9 * expected);
}

TEST(DeletionWindow, TriangleWindowIsEmptyAtDeskScale) {
  // n^(-1/2) = 1e-3 sits far above c^2 (ln n)^-6 for any admissible c.
  const auto w = deletion_window(complete_pattern(3), 1000000, std::pow(18.0, -6.0));
  EXPECT_NEAR(w.lower, 1e-3, 1e-15);
  EXPECT_LT(w.upper, w.lower);
}

}  // namespace
}  // namespace packbench
