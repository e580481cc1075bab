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
#include <sstream>

#include "ssrpu/datagen.hpp"
#include "ssrpu/dataset_io.hpp"
#include "ssrpu/errors.hpp"
#include "ssrpu/priors.hpp"

namespace ssrpu {
namespace {

SynthConfig small(std::uint64_t seed = 1) {
  SynthConfig c;
  c.n = 3000;
  c.d = 8;
  c.seed = seed;
  return c;
}

int count_labels(const ObservedDataset& ds, int cls) {
  return static_cast<int>((ds.observed.col(cls).array() == kPositive).count());
}

TEST(Generate, NoCensoringMeansObservedEqualsGold) {
  auto c = small();
  c.label_keep_prob = {1.0};
  const auto ds = generate(c);
  EXPECT_EQ(ds.observed, *ds.gold);
}

TEST(Generate, KeepZeroMeansNoLabels) {
  auto c = small();
  c.label_keep_prob = {0.0};
  EXPECT_EQ(generate(c).observed.maxCoeff(), kNegative);
}

TEST(Generate, GoldPriorIsPlantedExactly) {
  const auto c = small();
  const auto ds = generate(c);
  for (int i = 0; i < c.k; ++i) {
    const auto positives = ((ds.gold->col(i).array() == kPositive).count());
    EXPECT_EQ(positives, std::lround(c.class_priors[static_cast<std::size_t>(i)] * c.n));
  }
}

TEST(Generate, LabeledPriorWithinBinomialInterval) {
  SynthConfig c;
  c.n = 30000;
  c.class_priors = {0.3};
  c.k = 1;
  c.label_keep_prob = {1.0 / 3.0};
  c.seed = 5;
  const auto ds = generate(c);
  const double est = estimate_labeled_prior(ds)[0];
  // Labeled count ~ Binomial(9000, 1/3) over n = 30000 rows.
  const double se = std::sqrt(9000.0 * (1.0 / 3.0) * (2.0 / 3.0)) / 30000.0;
  EXPECT_LT(std::abs(est - 0.1), 3 * se);
}

TEST(Generate, UnlabeledPoolPriorMatchesDerivation) {
  SynthConfig c;
  c.n = 20000;
  c.seed = 8;
  const auto ds = generate(c);
  const auto labeled = estimate_labeled_prior(ds);
  for (int i = 0; i < c.k; ++i) {
    double gold_pos = 0, unl = 0, unl_pos = 0;
    for (Eigen::Index r = 0; r < ds.size(); ++r) {
      const bool g = (*ds.gold)(r, i) == kPositive;
      gold_pos += g;
      if (ds.observed(r, i) == kNegative) {
        ++unl;
        unl_pos += g;
      }
    }
    const double emp_pi_u = unl_pos / unl;
    const double derived = derive_unlabeled_prior(gold_pos / c.n, labeled[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(emp_pi_u, derived, 1e-12) << "class " << i;
  }
}

TEST(Generate, CensoringNeverInventsLabels) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = small(seed);
    c.label_keep_prob = {0.2, 0.5, 0.8, 1.0};
    const auto ds = generate(c);
    for (Eigen::Index r = 0; r < ds.size(); ++r)
      for (int i = 0; i < c.k; ++i)
        if (ds.observed(r, i) == kPositive) EXPECT_EQ((*ds.gold)(r, i), kPositive);
  }
}

TEST(Generate, DeterministicPerSeed) {
  EXPECT_TRUE(generate(small(3)) == generate(small(3)));
  EXPECT_FALSE(generate(small(3)) == generate(small(4)));
}

TEST(Generate, InvalidConfigs) {
  auto c = small();
  c.class_priors = {0.3, 0.2, 0.1, 1.0};
  EXPECT_THROW(generate(c), DomainError);
  c = small();
  c.label_keep_prob = {0.1, 0.2};
  EXPECT_THROW(generate(c), DomainError);
  c = small();
  c.cap_per_class = 0;
  EXPECT_THROW(generate(c), DomainError);
}

TEST(GenerateSplit, SharesConceptAndCapsTrainOnly) {
  auto c = small();
  c.cap_per_class = 2;
  const auto split = generate_split(c, 500);
  EXPECT_EQ(split.train.size(), c.n);
  EXPECT_EQ(split.test.size(), 500);
  for (int i = 0; i < c.k; ++i) EXPECT_LE(count_labels(split.train, i), 2);
  EXPECT_GT(count_labels(split.test, 0), 2);
  EXPECT_TRUE(split.test.has_gold());
}

TEST(ApplyCap, Counting) {
  auto c = small();
  c.label_keep_prob = {1.0};
  const auto ds = generate(c);
  const auto capped = apply_cap(ds, 1, 9);
  for (int i = 0; i < c.k; ++i) EXPECT_EQ(count_labels(capped, i), 1);
  EXPECT_EQ(*capped.gold, *ds.gold);
  EXPECT_TRUE(apply_cap(ds, 1, 9) == capped);
  EXPECT_TRUE(apply_cap(ds, 100000, 9) == ds);
  EXPECT_THROW(apply_cap(ds, 0, 9), DomainError);
}

TEST(ApplyCap, SurvivorsAreOriginalLabels) {
  auto c = small();
  const auto ds = generate(c);
  const auto capped = apply_cap(ds, 5, 2);
  for (Eigen::Index r = 0; r < ds.size(); ++r)
    for (int i = 0; i < c.k; ++i)
      if (capped.observed(r, i) == kPositive) EXPECT_EQ(ds.observed(r, i), kPositive);
}

TEST(SynthConfig, JsonRoundTrip) {
  auto c = small();
  c.cap_per_class = 3;
  c.label_keep_prob = {0.1, 0.2, 0.3, 0.4};
  const nlohmann::json j = c;
  const auto back = j.get<SynthConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
}

TEST(Generate, FileRoundTripOfGeneratedData) {
  const auto ds = generate(small(12));
  std::stringstream io;
  save_jsonl(ds, io);
  EXPECT_TRUE(load_jsonl(io) == ds);
}

}  // namespace
}  // namespace ssrpu
