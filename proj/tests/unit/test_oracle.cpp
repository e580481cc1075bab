// Copyright 2026 The ssrpu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ssrpu/errors.hpp"
#include "ssrpu/oracle.hpp"

namespace ssrpu::oracle {
namespace {

const LossSpec kPlainSquared{LossFamily::squared, LossForm::plain, 0.25};

// f_0 = 0, f_1 = x on a one-dimensional input.
Scorer identity_scorer() {
  Scorer s(Architecture::linear, 1, 1);
  s.parameters() << 0.0, 1.0, 0.0, 0.0;
  return s;
}

DiscreteDistribution::Point point(double x, int gold, int labeled, double mass) {
  DiscreteDistribution::Point p;
  p.x = Vector::Constant(1, x);
  p.gold = {gold};
  p.labeled = {labeled};
  p.mass = mass;
  return p;
}

TEST(PopulationRisk, TwoPointHandValue) {
  // positive at x = 0 (loss 0.25), negative at x = 1 (loss (1 + 1)^2 / 4 = 1)
  DiscreteDistribution d{1, {point(0.0, +1, -1, 0.5), point(1.0, -1, -1, 0.5)}};
  EXPECT_DOUBLE_EQ(population_risk_ori(d, identity_scorer(), kPlainSquared), 0.5 * 0.25 + 0.5 * 1.0);
}

TEST(PopulationRisk, ZeroLossScorer) {
  DiscreteDistribution d{1, {point(1.0, +1, +1, 0.3), point(-1.0, -1, -1, 0.7)}};
  EXPECT_EQ(population_risk_ori(d, identity_scorer(), kPlainSquared), 0.0);
}

TEST(PopulationRisk, InvariantToSplittingAPoint) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    auto d = random_distribution(rng, 10, 2, 3);
    const auto s = Scorer::random(Architecture::linear, 3, 2, 0, static_cast<std::uint64_t>(t));
    const double before = population_risk_ori(d, s, kPlainSquared);
    const double before_spu = population_risk_spu(d, s, kPlainSquared);
    auto half = d.points[0];
    half.mass /= 2.0;
    d.points[0].mass /= 2.0;
    d.points.push_back(half);
    EXPECT_NEAR(population_risk_ori(d, s, kPlainSquared), before, 1e-14);
    EXPECT_NEAR(population_risk_spu(d, s, kPlainSquared), before_spu, 1e-14);
  }
}

TEST(PopulationRisk, ZeroPositiveMassIsDomainError) {
  DiscreteDistribution d{1, {point(0.0, -1, -1, 1.0)}};
  EXPECT_THROW(population_risk_ori(d, identity_scorer(), kPlainSquared), DomainError);
  EXPECT_THROW(population_risk_spu(d, identity_scorer(), kPlainSquared), DomainError);
}

TEST(PopulationRisk, ShiftedFormEqualsOriginalOnRandomDistributions) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int k = 1 + t % 4;
    const auto d = random_distribution(rng, 20, k, 2);
    EXPECT_LE(d.points.size(), 20u);
    const auto s = Scorer::random(t % 2 ? Architecture::mlp1 : Architecture::linear, 2, k, 3,
                                  static_cast<std::uint64_t>(t));
    for (const auto& loss : all_losses())
      EXPECT_NEAR(population_risk_ori(d, s, loss), population_risk_spu(d, s, loss), 1e-10) << loss.name();
  }
}

TEST(PopulationRisk, FullyLabeledAndUnlabeledExtremes) {
  // everything positive is labeled: pi_u = 0
  DiscreteDistribution full{1, {point(0.3, +1, +1, 0.4), point(-0.2, -1, -1, 0.6)}};
  const auto s = identity_scorer();
  EXPECT_NEAR(population_risk_spu(full, s, kPlainSquared), population_risk_ori(full, s, kPlainSquared), 1e-15);
  // nothing labeled: the ordinary PU form pi E_P l(+1) + E_U l(-1) - pi E_P l(-1)
  DiscreteDistribution none{1, {point(0.3, +1, -1, 0.4), point(-0.2, -1, -1, 0.6)}};
  const double pu_form = 0.4 * squared_loss(0.3, +1) +
                         (0.4 * squared_loss(0.3, -1) + 0.6 * squared_loss(-0.2, -1)) -
                         0.4 * squared_loss(0.3, -1);
  EXPECT_NEAR(population_risk_spu(none, s, kPlainSquared), pu_form, 1e-15);
}

TEST(PopulationRisk, CorruptedPiUBreaksEquivalence) {
  std::mt19937_64 rng(3);
  int detected = 0;
  for (int t = 0; t < 20; ++t) {
    const auto d = random_distribution(rng, 20, 2, 2);
    const auto s = Scorer::random(Architecture::linear, 2, 2, 0, static_cast<std::uint64_t>(t));
    const double diff =
        std::abs(population_risk_ori(d, s, kPlainSquared) - population_risk_spu(d, s, kPlainSquared, 0.05));
    detected += diff > 1e-10;
  }
  EXPECT_EQ(detected, 20);
}

TEST(BayesGap, Examples) {
  EXPECT_EQ(bayes_gap(0.5, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(bayes_gap(1.0, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(bayes_gap(0.0, 0.25), -0.25);
  EXPECT_THROW(bayes_gap(0.5, 0.0), DomainError);
}

TEST(GridMinimize, Examples) {
  const auto grid = GapGrid::covering(0.25);
  EXPECT_NEAR(grid_minimize_conditional_risk(LossFamily::squared, 0.25, 0.9, grid), 0.2, 1e-3);
  EXPECT_NEAR(grid_minimize_conditional_risk(LossFamily::squared, 0.25, 0.5, grid), 0.0, 1e-3);
  EXPECT_GT(grid_minimize_conditional_risk(LossFamily::log_sigmoid, 0.25, 0.9, GapGrid{-10, 10, 1e-3}), 0.0);
}

TEST(GridMinimize, ClosedFormOnFullGrid) {
  for (double m : {0.1, 0.25, 0.5, 1.0})
    for (int i = 0; i <= 10; ++i) {
      const double delta = i / 10.0;
      const double g = grid_minimize_conditional_risk(LossFamily::squared, m, delta, GapGrid::covering(m));
      EXPECT_NEAR(g, 2 * delta * m - m, 1e-3);
      if (i != 5) EXPECT_EQ(g > 0, delta > 0.5);
    }
}

TEST(GridMinimize, MarginZeroCollapsesToZeroGap) {
  for (int i = 0; i <= 10; ++i)
    EXPECT_EQ(grid_minimize_conditional_risk(LossFamily::squared, 0.0, i / 10.0, GapGrid{-1, 1, 1e-3}), 0.0);
}

TEST(Convergence, ErrorShrinksAndIsReproducible) {
  std::mt19937_64 rng(4);
  const auto d = random_distribution(rng, 12, 2, 2);
  const auto s = Scorer::random(Architecture::linear, 2, 2, 0, 4);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 20; ++i) seeds.push_back(100 + i);
  const auto curve = empirical_vs_population_convergence(d, s, kPlainSquared, {1000, 100000}, seeds);
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_LT(curve[1].median_abs_error, curve[0].median_abs_error);
  const auto again = empirical_vs_population_convergence(d, s, kPlainSquared, {1000, 100000}, seeds);
  EXPECT_EQ(again[0].median_abs_error, curve[0].median_abs_error);
}

TEST(Convergence, ConstantScorerIsExactAtAnySize) {
  // A single point cannot carry both classes, so the zero-variance case is a
  // constant scorer: every conditional expectation is then exact.
  std::mt19937_64 rng(5);
  auto d = random_distribution(rng, 10, 1, 2);
  while (d.pi_labeled()[0] < 0.05) d = random_distribution(rng, 10, 1, 2);  // both groups get sampled
  const Scorer zero(Architecture::linear, 2, 1);
  for (const auto& p : empirical_vs_population_convergence(d, zero, kPlainSquared, {500, 5000}, {1, 2, 3}))
    EXPECT_NEAR(p.median_abs_error, 0.0, 1e-14);
}

TEST(RandomDistribution, RespectsLabelingAssumptions) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto d = random_distribution(rng, 20, 3, 2);
    EXPECT_NO_THROW(d.validate());
    const auto pi = d.pi(), pl = d.pi_labeled();
    for (std::size_t c = 0; c < pi.size(); ++c) {
      EXPECT_GT(pi[c], 0.0);
      EXPECT_LT(pi[c], 1.0);
      EXPECT_LE(pl[c], pi[c] + 1e-15);
    }
  }
}

TEST(RunChecks, AllPassAndNamesAreUnique) {
  const auto verdicts = run_checks();
  std::set<std::string> names;
  for (const auto& v : verdicts) {
    EXPECT_TRUE(v.passed) << v.name << ": " << v.detail;
    EXPECT_TRUE(names.insert(v.name).second) << v.name;
  }
  EXPECT_GE(verdicts.size(), 9u);
}

TEST(RunChecks, CorruptedPiUFailsEquivalenceOnly) {
  CheckOptions opt;
  opt.corrupt_pi_u = 0.05;
  for (const auto& v : run_checks(opt)) {
    if (v.name == "risk_equivalence")
      EXPECT_FALSE(v.passed);
    else
      EXPECT_TRUE(v.passed) << v.name;
  }
}

TEST(RelativeError, Floor) {
  EXPECT_NEAR(relative_error(1.0, 1.1), 0.1 / 1.1, 1e-15);
  EXPECT_NEAR(relative_error(0.0, 1e-6), 1e-2, 1e-15);
}

}  // namespace
}  // namespace ssrpu::oracle
