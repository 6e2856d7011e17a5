#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "packbench/bootstrap.hpp"

namespace packbench {
namespace {

BootstrapConfig small_config(std::uint64_t seed) {
  BootstrapConfig cfg;
  cfg.seed = seed;
  cfg.oracle.seed = seed;
  cfg.oracle.sweeps = 2;
  cfg.oracle.swap_budget = 100;
  return cfg;
}

TEST(PlanPartition, Examples) {
  const auto plan = plan_partition_for_threshold(1000, 100);
  EXPECT_EQ(plan.q, 4u);
  EXPECT_EQ(plan.sizes, (std::vector<std::size_t>{500, 250, 125, 125}));

  const auto single = plan_partition_for_threshold(8, 7);
  EXPECT_EQ(single.q, 1u);
  EXPECT_EQ(single.sizes, (std::vector<std::size_t>{8}));

  EXPECT_THROW(plan_partition_for_threshold(100, 100), RegimeViolation);
  EXPECT_THROW(plan_partition(50, 0.1, Rational(2), 3.0), RegimeViolation);
}

TEST(PlanPartition, ThresholdFromParameters) {
  // (3/0.1)^2 = 900 exactly; snapping keeps the ceiling at 900.
  EXPECT_EQ(plan_partition(5000, 0.1, Rational(2), 3.0).threshold, 900u);
  // (1/0.5)^(5/2) = 2^2.5 ~ 5.66
  EXPECT_EQ(plan_partition(100, 0.5, Rational(5, 2), 1.0).threshold, 6u);
}

TEST(PlanPartition, ArithmeticInvariants) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t threshold = 1 + rng() % 5000;
    const std::size_t n = static_cast<std::size_t>(threshold + 1 + rng() % 200000);
    const auto plan = plan_partition_for_threshold(n, threshold);
    const std::size_t q = plan.q;
    ASSERT_EQ(plan.sizes.size(), q);
    std::size_t total = 0;
    for (auto s : plan.sizes) total += s;
    EXPECT_EQ(total, n);
    for (std::size_t i = 0; i + 1 < q; ++i) EXPECT_EQ(plan.sizes[i], n >> (i + 1));
    // n / 2^(q-1) <= |V_q| <= n / 2^(q-1) + q, multiplied through by 2^(q-1).
    const unsigned __int128 last = static_cast<unsigned __int128>(plan.sizes.back()) << (q - 1);
    EXPECT_TRUE(last >= n);
    EXPECT_TRUE(last <= static_cast<unsigned __int128>(n) + (static_cast<unsigned __int128>(q) << (q - 1)));
    // q is maximal: n / 2^(q-1) > T and n / 2^q <= T.
    EXPECT_TRUE(static_cast<unsigned __int128>(n) > static_cast<unsigned __int128>(threshold) << (q - 1));
    EXPECT_FALSE(static_cast<unsigned __int128>(n) > static_cast<unsigned __int128>(threshold) << q);
    for (auto s : plan.sizes) {
      EXPECT_GE(s, threshold);
      EXPECT_TRUE((static_cast<unsigned __int128>(s) + 1) << (q - 1) >= n);
    }
  }
}

TEST(SamplePartition, CompleteHostSucceedsFirstTry) {
  const auto g = complete_graph(60);
  const auto plan = plan_partition(60, 1.0, Rational(2), 3.0);
  const auto parts = sample_partition(g, plan, 0.1, Rational(3), 1.0, 1, 4);
  ASSERT_EQ(parts.size(), plan.q);
  std::vector<int> seen(60, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    EXPECT_EQ(parts[i].size(), plan.sizes[i]);
    for (Vertex v : parts[i]) ++seen[v];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(SamplePartition, EmptyHostFailsWithFullDeficit) {
  const Graph g(60);
  const auto plan = plan_partition(60, 1.0, Rational(2), 3.0);
  try {
    sample_partition(g, plan, 0.1, Rational(3), 0.5, 3, 4);
    FAIL() << "expected DegreeConditionUnsatisfiable";
  } catch (const DegreeConditionUnsatisfiable& e) {
    EXPECT_EQ(e.witness.actual, 0u);
    EXPECT_GT(e.witness.required, 0.0);
    EXPECT_DOUBLE_EQ(e.witness.deficit(), e.witness.required);
  }
}

TEST(TheoremBound, Examples) {
  EXPECT_DOUBLE_EQ(theorem_bound(1.0, Rational(2), 0.1, 1.0), 0.1);
  EXPECT_NEAR(theorem_bound(0.1, Rational(2), 0.1, 2.0), 40.0, 1e-9);
}

TEST(RegimeCheck, Examples) {
  const auto r = regime_check(10000, 0.02, complete_pattern(3), 1.0);
  EXPECT_EQ(r.regime, Regime::inside);
  EXPECT_NEAR(r.lower, 0.01, 1e-15);
  EXPECT_NEAR(r.upper, 0.1086, 1e-4);
  EXPECT_EQ(regime_check(10, 1.0, complete_pattern(3), 1.0).regime, Regime::above);
  EXPECT_EQ(regime_check(10000, r.lower, complete_pattern(3), 1.0).regime, Regime::inside);
  EXPECT_EQ(regime_check(10000, 0.005, complete_pattern(3), 1.0).regime, Regime::below);
}

TEST(Bootstrap, SingleStageEqualsOracle) {
  // Threshold (6/1)^2 = 36 < 60 <= 72 gives a single part.
  const auto g = gnp_generate({60, 0.9, 5});
  auto cfg = small_config(3);
  cfg.C = 6.0;
  const auto result = bootstrap_pack(g, complete_pattern(3), 1.0, cfg);
  ASSERT_EQ(result.plan.q, 1u);
  EXPECT_EQ(result.packing, HeuristicOracle{}(g, complete_pattern(3), cfg.oracle));
}

TEST(Bootstrap, MergedPackingVerifiesAndTraceIsConsistent) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const double p = 0.3;
    const auto g = gnp_generate({400, p, seed});
    const auto h = complete_pattern(3);
    const auto result = bootstrap_pack(g, h, p, small_config(seed));
    EXPECT_TRUE(verify_packing(g, h, result.packing)) << verify_packing(g, h, result.packing).detail;
    ASSERT_EQ(result.stages.size(), result.plan.q);
    std::size_t covered = 0;
    std::size_t total_copies = 0;
    for (std::size_t i = 0; i < result.stages.size(); ++i) {
      const auto& st = result.stages[i];
      EXPECT_EQ(st.part_size, result.plan.sizes[i]);
      EXPECT_EQ(st.pool_size, st.part_size + st.carried_leftover);
      EXPECT_EQ(st.stage_leftover + 3 * st.copies_added, st.pool_size);
      if (i > 0) EXPECT_EQ(st.carried_leftover, result.stages[i - 1].stage_leftover);
      total_copies += st.copies_added;
      const std::size_t now = 3 * total_copies;
      EXPECT_GE(now, covered);
      covered = now;
    }
    EXPECT_EQ(result.packing.copies.size(), total_copies);
    EXPECT_EQ(leftover_count(result.packing), result.stages.back().stage_leftover);
  }
}

TEST(Bootstrap, ExactOracleCannotBeatGlobalOptimum) {
  std::mt19937_64 rng(31);
  const auto h = complete_pattern(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = oracle::random_small_graph(12, 0.7, rng);
    BootstrapConfig cfg;
    cfg.C = 1.0;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto result = bootstrap_pack(g, h, 0.7, cfg, ExactOracle{});
    EXPECT_TRUE(verify_packing(g, h, result.packing));
    EXPECT_GE(leftover_count(result.packing), 12 - 3 * oracle::max_packing_size(g, h.graph()));
  }
}

TEST(Bootstrap, Deterministic) {
  const auto g = gnp_generate({300, 0.3, 8});
  const auto a = bootstrap_pack(g, cycle_pattern(4), 0.3, small_config(6));
  const auto b = bootstrap_pack(g, cycle_pattern(4), 0.3, small_config(6));
  EXPECT_EQ(a.packing, b.packing);
  EXPECT_EQ(a.partition_violations, b.partition_violations);
}

TEST(Bootstrap, StrictPolicyPropagatesPartitionFailure) {
  const Graph g(200);
  auto cfg = small_config(1);
  cfg.partition_policy = BootstrapConfig::PartitionPolicy::strict;
  EXPECT_THROW(bootstrap_pack(g, complete_pattern(3), 0.5, cfg), DegreeConditionUnsatisfiable);
  cfg.partition_policy = BootstrapConfig::PartitionPolicy::best_effort;
  const auto result = bootstrap_pack(g, complete_pattern(3), 0.5, cfg);
  EXPECT_FALSE(result.precondition_met);
  EXPECT_GT(result.partition_violations, 0u);
  EXPECT_EQ(leftover_count(result.packing), 200u);
}

TEST(Bootstrap, RegimeViolationPropagates) {
  EXPECT_THROW(bootstrap_pack(complete_graph(20), complete_pattern(3), 0.5, small_config(0)), RegimeViolation);
}

TEST(BootstrapConfig, MarginsAndValidation) {
  BootstrapConfig cfg;
  cfg.gamma = 0.4;
  EXPECT_DOUBLE_EQ(cfg.oracle_gamma(), 0.02);
  EXPECT_DOUBLE_EQ(cfg.stage_budget_fraction(), 0.04);
  EXPECT_DOUBLE_EQ(cfg.carry_fraction(), 0.1);
  EXPECT_DOUBLE_EQ(cfg.partition_margin(), 0.2);
  cfg.gamma = 1.0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg.gamma = 0.3;
  cfg.max_resamples = 0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace packbench
