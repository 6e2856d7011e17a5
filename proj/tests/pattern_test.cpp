#include <algorithm>
#include <bit>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "packbench/pattern.hpp"

namespace packbench {
namespace {

Rational brute_m2(const Pattern& h) {
  auto [num, den] = oracle::brute_m2(h.graph());
  return {num, den};
}

// Same maximization as density_m2 but scanning subsets from the top down.
Rational density_m2_reversed(const Pattern& h) {
  const std::size_t k = h.vertex_count();
  std::optional<Rational> best;
  for (std::uint32_t subset = (1U << k); subset-- > 0;) {
    const int size = std::popcount(subset);
    if (size < 3) continue;
    std::int64_t edges = 0;
    for (const Edge& e : h.graph().edges()) edges += ((subset >> e.u) & (subset >> e.v) & 1U);
    const Rational ratio(edges - 1, size - 2);
    if (!best || ratio > *best) best = ratio;
  }
  return *best;
}

std::vector<Pattern> sample_patterns() {
  std::vector<Pattern> out;
  for (std::size_t t = 3; t <= 7; ++t) {
    out.push_back(complete_pattern(t));
    out.push_back(cycle_pattern(t));
  }
  std::mt19937_64 rng(17);
  while (out.size() < 60) {
    const std::size_t k = 3 + rng() % 4;
    auto g = oracle::random_small_graph(k, 0.6, rng);
    if (has_cycle(g)) out.emplace_back(g, "random");
  }
  return out;
}

TEST(Rational, LowestTerms) {
  const Rational r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(to_string(Rational(5, 2)), "5/2");
}

TEST(Pattern, Validation) {
  EXPECT_THROW(Pattern(complete_graph(2), "K2"), std::invalid_argument);
  EXPECT_THROW(Pattern(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}), "P4"), std::invalid_argument);
  EXPECT_THROW(Pattern(complete_graph(11), "K11"), std::invalid_argument);
  EXPECT_NO_THROW(Pattern(complete_graph(10), "K10"));
}

TEST(Pattern, Presets) {
  EXPECT_EQ(pattern_from_preset("K4")->graph(), complete_graph(4));
  EXPECT_EQ(pattern_from_preset("C7")->graph(), cycle_graph(7));
  EXPECT_EQ(pattern_from_preset("K10")->vertex_count(), 10u);
  EXPECT_FALSE(pattern_from_preset("K2"));
  EXPECT_FALSE(pattern_from_preset("K11"));
  EXPECT_FALSE(pattern_from_preset("C03"));
  EXPECT_FALSE(pattern_from_preset("Q3"));
  EXPECT_FALSE(pattern_from_preset("K"));
}

TEST(DensityM2, AnchoredValues) {
  EXPECT_EQ(density_m2(complete_pattern(3)), Rational(2));
  EXPECT_EQ(density_m2(cycle_pattern(4)), Rational(3, 2));
  EXPECT_EQ(density_m2(complete_pattern(4)), Rational(5, 2));
}

TEST(DensityM2, CyclesAndCliquesClosedForms) {
  for (std::int64_t t = 3; t <= 10; ++t) {
    EXPECT_EQ(density_m2(cycle_pattern(static_cast<std::size_t>(t))), Rational(t - 1, t - 2));
    EXPECT_EQ(density_m2(complete_pattern(static_cast<std::size_t>(t))), Rational(t + 1, 2));
  }
}

TEST(DensityM2, AtLeastOneWithCycle) {
  for (const auto& h : sample_patterns()) EXPECT_GE(density_m2(h), Rational(1));
}

TEST(DensityM2, InducedReductionMatchesAllSubgraphs) {
  for (const auto& h : sample_patterns()) {
    if (h.vertex_count() > 6) continue;
    EXPECT_EQ(density_m2(h), brute_m2(h));
  }
}

TEST(DensityM2, OrderIndependent) {
  for (const auto& h : sample_patterns()) EXPECT_EQ(density_m2(h), density_m2_reversed(h));
}

TEST(ChromaticNumber, Examples) {
  EXPECT_EQ(chromatic_number(complete_pattern(3)), 3u);
  EXPECT_EQ(chromatic_number(cycle_pattern(4)), 2u);
  EXPECT_EQ(chromatic_number(cycle_pattern(5)), 3u);
  EXPECT_EQ(chromatic_number(complete_pattern(10)), 10u);
  // Petersen-free check on a wheel W5 (hub + C5): 4 colors.
  auto wheel = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {5, 0}, {5, 1}, {5, 2}, {5, 3}, {5, 4}});
  EXPECT_EQ(chromatic_number(wheel), 4u);
}

TEST(SigmaMinClass, Examples) {
  EXPECT_EQ(sigma_min_class(complete_pattern(3)), 1u);
  EXPECT_EQ(sigma_min_class(cycle_pattern(4)), 2u);
  EXPECT_EQ(sigma_min_class(cycle_pattern(5)), 1u);
  EXPECT_EQ(sigma_min_class(cycle_pattern(6)), 3u);
}

TEST(CriticalChromatic, Examples) {
  EXPECT_EQ(critical_chromatic(complete_pattern(3)), Rational(3));
  EXPECT_EQ(pattern_params(complete_pattern(3)).degree_coefficient(), Rational(2, 3));
  EXPECT_EQ(critical_chromatic(cycle_pattern(4)), Rational(2));
  EXPECT_EQ(pattern_params(cycle_pattern(4)).degree_coefficient(), Rational(1, 2));
  EXPECT_EQ(critical_chromatic(cycle_pattern(5)), Rational(5, 2));
}

TEST(CriticalChromatic, BoundedByChromaticNumber) {
  for (const auto& h : sample_patterns()) {
    const auto params = pattern_params(h);
    const Rational chi(static_cast<std::int64_t>(params.chi));
    EXPECT_LE(params.chi_cr, chi);
    EXPECT_GT(params.chi_cr, chi - 1);
    EXPECT_EQ(params.chi_cr == chi, params.sigma * params.chi == h.vertex_count());
  }
}

TEST(CliqueClosedForm, Examples) {
  EXPECT_EQ(clique_m2_closed_form(2), Rational(2));
  EXPECT_EQ(clique_m2_closed_form(3), Rational(5, 2));
  EXPECT_EQ(clique_m2_closed_form(4), Rational(3));
  EXPECT_THROW(clique_m2_closed_form(1), std::invalid_argument);
  for (std::int64_t t = 2; t <= 6; ++t)
    EXPECT_EQ(clique_m2_closed_form(t), density_m2(complete_pattern(static_cast<std::size_t>(t + 1))));
}

}  // namespace
}  // namespace packbench
