#include "idsgame/mixing_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

using namespace idsgame;

namespace {

// Population whose edge weights are exactly (0.6, 0.3, 0.1).
PopulationProfile w631_population() {
  return PopulationProfile::from_sizes({0.6, 0.15, 0.1 / 3.0});
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

TEST(MixingAnalysis, RiskDistributionSumsToOne) {
  const auto pop = make_power_law_population(9, 1.4);
  const auto g = make_rho_mixing(pop, 0.7);
  const auto dist = risk_distribution(pop, g);
  double sum = 0.0;
  for (double v : dist.v) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(MixingAnalysis, DominanceEqualVectorsHoldWeakly) {
  const auto pop = make_power_law_population(5, 2.0);
  const auto g = make_rho_mixing(pop, 0.2);
  const auto rep = dominance_condition(pop, g, g);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.holds_strictly);
  EXPECT_FALSE(rep.fails_at.has_value());
}

TEST(MixingAnalysis, DominanceReferenceExample) {
  const auto pop = w631_population();
  EXPECT_NEAR(pop.edge_weight(1), 0.6, 1e-14);
  EXPECT_NEAR(pop.edge_weight(2), 0.3, 1e-14);
  EXPECT_NEAR(pop.edge_weight(3), 0.1, 1e-14);
  // Published 3-decimal vectors; the dominating one needs renormalization.
  const auto g1 = MixingVector::renormalized(pop, {0.942, 1.05, 1.2});
  const auto g2 = MixingVector::admissible(pop, {1.02, 1.0, 0.88});
  const auto rep = dominance_condition(pop, g1, g2);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.holds_strictly);
  // Reversed order fails immediately.
  const auto rev = dominance_condition(pop, g2, g1);
  EXPECT_FALSE(rev.holds);
  EXPECT_EQ(rev.fails_at.value_or(-1), 1);
}

TEST(MixingAnalysis, DominanceAcrossRhoFamily) {
  const auto pop = make_power_law_population(20, 2.0);
  const auto hi = make_rho_mixing(pop, 0.3);
  const auto lo = make_rho_mixing(pop, -0.3);
  const auto rep = dominance_condition(pop, hi, lo);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.holds_strictly);
}

TEST(MixingAnalysis, RatioConditionExamples) {
  EXPECT_TRUE(sufficient_ratio_condition(std::vector<double>{1.0, 2.0, 3.0},
                                         std::vector<double>{1.0, 2.0, 3.0}));
  // Reference pair: ratios 0.9235, 1.05, 1.3636 increase.
  EXPECT_TRUE(sufficient_ratio_condition(std::vector<double>{0.942, 1.05, 1.2},
                                         std::vector<double>{1.02, 1.0, 0.88}));
  EXPECT_FALSE(sufficient_ratio_condition(std::vector<double>{1.2, 1.0, 1.1},
                                          std::vector<double>{1.0, 1.0, 1.2}));
  EXPECT_THROW(sufficient_ratio_condition(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
               std::invalid_argument);
  EXPECT_THROW(sufficient_ratio_condition(std::vector<double>{1.0, -1.0},
                                          std::vector<double>{1.0, 2.0}),
               std::invalid_argument);
}

TEST(MixingAnalysis, RatioConditionImpliesDominanceFuzz) {
  auto rng = test_support::make_rng(71);
  int cases = 0;
  while (cases < 1000) {
    const int dmax = 2 + static_cast<int>(rng() % 18);
    const auto pop = test_support::random_population(rng, dmax);
    const auto g2 = test_support::random_mixing(rng, pop, 0.5);
    // Multiply by a nondecreasing positive sequence, then renormalize; the
    // ratio condition is scale invariant, so it holds by construction.
    std::vector<double> mult(static_cast<std::size_t>(dmax));
    double acc = test_support::uniform(rng, 0.5, 1.5);
    for (double& m : mult) {
      m = acc;
      acc += test_support::uniform(rng, 0.0, 0.3);
    }
    auto g1v = g2.values();
    for (int i = 0; i < dmax; ++i) g1v[static_cast<std::size_t>(i)] *= mult[static_cast<std::size_t>(i)];
    const auto g1 = MixingVector::renormalized(pop, g1v);
    ASSERT_TRUE(sufficient_ratio_condition(g1, g2));
    const auto rep = dominance_condition(pop, g1, g2);
    EXPECT_TRUE(rep.holds) << "ratio condition held but dominance failed";
    ++cases;
  }
}

TEST(MixingAnalysis, PrefixRatioLemmaExamples) {
  EXPECT_TRUE(prefix_ratio_lemma_check({1.0, 1.0}, {1.0, 1.0}));
  // a = (1,1), b = (2,1): prefix ratios 2 >= 3/2.
  EXPECT_TRUE(prefix_ratio_lemma_check({1.0, 1.0}, {2.0, 1.0}));
  EXPECT_FALSE(prefix_ratio_lemma_check({1.0, 1.0}, {1.0, 2.0}));
  EXPECT_THROW(prefix_ratio_lemma_check({1.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(prefix_ratio_lemma_check({1.0}, {1.0}), std::invalid_argument);
}

TEST(MixingAnalysis, PrefixRatioLemmaFuzz) {
  auto rng = test_support::make_rng(73);
  int held = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 12);
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    double ratio = test_support::uniform(rng, 0.5, 3.0);
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = test_support::uniform(rng, 0.05, 4.0);
      b[static_cast<std::size_t>(i)] = ratio * a[static_cast<std::size_t>(i)];
      ratio -= test_support::uniform(rng, 0.0, ratio / (n + 1 - i));  // nonincreasing
    }
    // Throws invariant_violation if the conclusion ever failed; it must not.
    if (prefix_ratio_lemma_check(a, b)) ++held;
  }
  EXPECT_EQ(held, 1000);
}

TEST(MixingAnalysis, TransferReferenceExample) {
  const auto pop = w631_population();
  const auto g_from = MixingVector::admissible(pop, {1.02, 1.0, 0.88});
  const auto g_to = MixingVector::renormalized(pop, {0.942, 1.05, 1.2});

  const auto steps = transfer_sequence(pop, g_from, g_to);
  ASSERT_EQ(steps.size(), 2u);

  EXPECT_EQ(steps[0].d1, 3);
  EXPECT_EQ(steps[0].d2, 1);
  EXPECT_NEAR(steps[0].delta_d1, 0.31976004799040181, 1e-12);
  EXPECT_NEAR(steps[0].delta_d2, 0.31976004799040181 / 6.0, 1e-12);
  EXPECT_NEAR(steps[0].g_after[0], 0.96670665866826644, 1e-12);
  EXPECT_DOUBLE_EQ(steps[0].g_after[1], 1.0);
  EXPECT_NEAR(steps[0].g_after[2], 1.1997600479904018, 1e-12);
  // The published 3-decimal rendering of the intermediate state.
  EXPECT_DOUBLE_EQ(round3(steps[0].g_after[0]), 0.967);
  EXPECT_DOUBLE_EQ(round3(steps[0].g_after[2]), 1.2);

  EXPECT_EQ(steps[1].d1, 2);
  EXPECT_EQ(steps[1].d2, 1);
  EXPECT_DOUBLE_EQ(round3(steps[1].delta_d1), 0.05);
  EXPECT_DOUBLE_EQ(round3(steps[1].delta_d2), 0.025);
  for (int d = 1; d <= 3; ++d)
    EXPECT_NEAR(steps[1].g_after[static_cast<std::size_t>(d - 1)], g_to.at_degree(d), 1e-12);
  EXPECT_DOUBLE_EQ(round3(steps[1].g_after[0]), 0.942);
  EXPECT_DOUBLE_EQ(round3(steps[1].g_after[1]), 1.05);
  EXPECT_DOUBLE_EQ(round3(steps[1].g_after[2]), 1.2);
}

TEST(MixingAnalysis, TransferTrivialAndErrorCases) {
  const auto pop = w631_population();
  const auto g = MixingVector::admissible(pop, {1.02, 1.0, 0.88});
  EXPECT_TRUE(transfer_sequence(pop, g, g).empty());

  const auto g_hi = MixingVector::renormalized(pop, {0.942, 1.05, 1.2});
  EXPECT_THROW(transfer_sequence(pop, g_hi, g), std::invalid_argument);
}

TEST(MixingAnalysis, TransferFuzzTerminatesAndConserves) {
  auto rng = test_support::make_rng(77);
  int cases = 0;
  while (cases < 300) {
    const int dmax = 2 + static_cast<int>(rng() % 19);
    const auto pop = test_support::random_population(rng, dmax);
    const auto g_from = test_support::random_mixing(rng, pop, 0.3);
    auto g_tov = g_from.values();
    for (int k = 0; k < 1 + static_cast<int>(rng() % 5); ++k) {
      const int dhi = 2 + static_cast<int>(rng() % (dmax - 1));
      const int dlo = 1 + static_cast<int>(rng() % (dhi - 1));
      const double delta = test_support::uniform(rng, 0.0, 0.05);
      const double counter = delta * pop.edge_weight(dhi) / pop.edge_weight(dlo);
      if (g_tov[static_cast<std::size_t>(dlo - 1)] - counter < 0.05) continue;
      g_tov[static_cast<std::size_t>(dhi - 1)] += delta;
      g_tov[static_cast<std::size_t>(dlo - 1)] -= counter;
    }
    const auto g_to = MixingVector::admissible(pop, g_tov);
    if (!dominance_condition(pop, g_to, g_from).holds) continue;
    ++cases;

    const auto steps = transfer_sequence(pop, g_from, g_to);
    EXPECT_LE(static_cast<int>(steps.size()), 2 * dmax);
    std::vector<double> g = g_from.values();
    for (const auto& s : steps) {
      EXPECT_NEAR(s.delta_d2, s.delta_d1 * pop.edge_weight(s.d1) / pop.edge_weight(s.d2),
                  1e-12 * std::max(1.0, s.delta_d2));
      g = s.g_after;
      double mass = 0.0;
      for (int d = 1; d <= dmax; ++d) mass += pop.edge_weight(d) * g[static_cast<std::size_t>(d - 1)];
      EXPECT_NEAR(mass, 1.0, 1e-13);
    }
    for (int d = 1; d <= dmax; ++d)
      EXPECT_NEAR(g[static_cast<std::size_t>(d - 1)], g_to.at_degree(d), 1e-9);
  }
}

TEST(MixingAnalysis, AreIncreasesAlongTransferPath) {
  const auto pop = w631_population();
  const ThreatModel threat(0.7, 1.0, 10.0, 1e-3, 1e3);
  const auto curve = InfectionCurve::power(0.1, 1.0);
  const auto theta = ExposureResponse::linear(30.0);
  const auto g_from = MixingVector::admissible(pop, {1.02, 1.0, 0.88});
  const auto g_to = MixingVector::renormalized(pop, {0.942, 1.05, 1.2});
  const auto steps = transfer_sequence(pop, g_from, g_to);
  const auto trace = are_along_transfer(pop, threat, curve, theta, g_from, steps);
  ASSERT_EQ(trace.size(), steps.size() + 1);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) EXPECT_GT(trace[i + 1], trace[i]);
}
