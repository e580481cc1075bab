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

#include "ssrpu/errors.hpp"
#include "ssrpu/experiment.hpp"

namespace ssrpu {
namespace {

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.synth.n = 1500;
  c.synth.d = 8;
  c.holdout = 500;
  c.train.epochs = 2;
  c.train.batch_size = 128;
  c.seeds = {62, 63};
  return c;
}

TEST(ExperimentConfig, JsonRoundTripRerunsIdentically) {
  auto c = tiny();
  c.pi_override = std::vector<double>{0.3, 0.2, 0.1, 0.05};
  c.risk.class_weighting = true;
  const nlohmann::json j = c;
  const auto back = j.get<ExperimentConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_EQ(to_csv(run_synthetic(back, 62, "a").row), to_csv(run_synthetic(c, 62, "a").row));
}

TEST(ExperimentConfig, Validation) {
  auto c = tiny();
  c.multiplier = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = tiny();
  c.risk.loss.margin = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = tiny();
  c.seeds.clear();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(PriorsFor, MultiplierAndOverride) {
  auto c = tiny();
  const auto split = generate_split(c.synth, 0);
  const auto labeled = estimate_labeled_prior(split.train);
  const auto p = priors_for(split.train, c);
  for (std::size_t i = 0; i < labeled.size(); ++i) EXPECT_NEAR(p.pi[i], 3.0 * labeled[i], 1e-15);
  c.pi_override = std::vector<double>{0.3, 0.2, 0.1, 0.05};
  EXPECT_EQ(priors_for(split.train, c).pi, *c.pi_override);
  c.pi_override = std::vector<double>{0.3};
  EXPECT_THROW(priors_for(split.train, c), ConfigError);
}

TEST(Evaluate, GoldAsPredictionsAndMissingGold) {
  const auto split = generate_split(tiny().synth, 0);
  // A scorer whose class scores reproduce the gold signs: feed gold as features.
  ObservedDataset ds = split.train;
  ds.features = ds.gold->cast<double>();
  Scorer s(Architecture::linear, 4, 4);
  for (int c = 0; c < 4; ++c) s.parameters()((c + 1) * 4 + c) = 1.0;  // W row c+1 picks feature c
  const auto rep = evaluate(s, ds, LossForm::ranking);
  EXPECT_EQ(rep.micro_f1, 1.0);
  EXPECT_EQ(rep.mean_l_na, 0.0);
  ds.gold.reset();
  try {
    evaluate(s, ds, LossForm::ranking);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(std::string(e.what()), "evaluation requires gold labels");
  }
}

TEST(Csv, RowRoundTrip) {
  RunRow r;
  r.run_id = "margin=0.25/seed=62";
  r.estimator = Estimator::nnpu;
  r.loss = "log-sigmoid-ranking";
  r.margin = 0.1;
  r.multiplier = 3.0;
  r.seed = 64;
  r.precision = 1.0 / 3.0;
  r.recall = 0.7;
  r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  r.l_na = 0.123456789012345678;
  const auto back = parse_csv_row(to_csv(r));
  EXPECT_EQ(back.run_id, r.run_id);
  EXPECT_EQ(back.estimator, r.estimator);
  EXPECT_EQ(back.loss, r.loss);
  EXPECT_EQ(back.margin, r.margin);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.precision, r.precision);
  EXPECT_EQ(back.f1, r.f1);
  EXPECT_EQ(back.l_na, r.l_na);
  EXPECT_FALSE(back.failed);
  EXPECT_EQ(std::string(csv_header()), "run_id,estimator,loss,margin,multiplier,seed,P,R,F1,L_NA");
}

TEST(Csv, FailedRowsCarryNan) {
  RunRow r;
  r.loss = "squared-ranking";
  r.failed = true;
  r.f1 = 0.9;
  const auto back = parse_csv_row(to_csv(r));
  EXPECT_TRUE(back.failed);
  EXPECT_TRUE(std::isnan(back.f1));
  EXPECT_THROW(parse_csv_row("a,b,c"), ParseError);
}

TEST(Sweep, RowsPerValueAndSeedAndDeterministic) {
  auto c = tiny();
  const std::vector<double> margins{0.1, 0.25, 0.5, 1.0};
  const auto rows = sweep(c, SweepAxis::margin, margins, 1);
  ASSERT_EQ(rows.size(), margins.size() * c.seeds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].margin, margins[i / c.seeds.size()]);
    EXPECT_EQ(rows[i].seed, c.seeds[i % c.seeds.size()]);
    EXPECT_GT(rows[i].f1, 0.0);
  }
  const auto threaded = sweep(c, SweepAxis::margin, margins, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(to_csv(rows[i]), to_csv(threaded[i]));
  EXPECT_THROW(sweep(c, SweepAxis::margin, {0.25}, 1), ConfigError);
}

TEST(Sweep, FailedCellIsMarkedAndSweepContinues) {
  auto c = tiny();
  c.seeds = {62};
  const auto rows = sweep(c, SweepAxis::margin, {0.0, 0.25}, 1);  // margin 0 is rejected
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].failed);
  EXPECT_NE(rows[0].error.find("margin"), std::string::npos);
  EXPECT_FALSE(rows[1].failed);
}

TEST(Sweep, KeepProbAxis) {
  auto c = tiny();
  c.seeds = {62};
  const auto rows = sweep(c, SweepAxis::keep_prob, {0.2, 0.6}, 1);
  EXPECT_FALSE(rows[0].failed);
  EXPECT_NE(to_csv(rows[0]), to_csv(rows[1]));
  EXPECT_EQ(parse_sweep_axis("keep_prob"), SweepAxis::keep_prob);
  EXPECT_THROW(parse_sweep_axis("lr"), ConfigError);
}

TEST(Summarize, MeanAndSampleStd) {
  std::vector<RunRow> rows(3);
  rows[0].f1 = 0.2;
  rows[1].f1 = 0.4;
  rows[2].failed = true;
  rows[2].f1 = 100;
  const auto s = summarize(rows);
  EXPECT_EQ(s.runs, 3u);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_NEAR(s.f1.mean, 0.3, 1e-15);
  EXPECT_NEAR(s.f1.stddev, std::sqrt(0.02), 1e-15);
}

}  // namespace
}  // namespace ssrpu
