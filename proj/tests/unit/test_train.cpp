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

#include "ssrpu/datagen.hpp"
#include "ssrpu/errors.hpp"
#include "ssrpu/metrics.hpp"
#include "ssrpu/train.hpp"

namespace ssrpu {
namespace {

TEST(Schedule, Endpoints) {
  const std::int64_t total = 100, warm = warmup_steps_for(0.06, total);
  EXPECT_EQ(warm, 6);
  EXPECT_EQ(schedule_multiplier(0, warm, total), 0.0);
  EXPECT_DOUBLE_EQ(schedule_multiplier(3, warm, total), 0.5);
  EXPECT_EQ(schedule_multiplier(warm, warm, total), 1.0);
  EXPECT_EQ(schedule_multiplier(total, warm, total), 0.0);
  EXPECT_DOUBLE_EQ(schedule_multiplier(53, warm, total), 0.5);
  EXPECT_EQ(schedule_multiplier(0, 0, 10), 1.0);
}

TEST(Schedule, RisesThenFalls) {
  const std::int64_t total = 500, warm = warmup_steps_for(0.06, total);
  double prev = -1.0;
  for (std::int64_t s = 0; s <= warm; ++s) {
    EXPECT_GT(schedule_multiplier(s, warm, total), prev);
    prev = schedule_multiplier(s, warm, total);
  }
  for (std::int64_t s = warm + 1; s <= total; ++s) {
    EXPECT_LT(schedule_multiplier(s, warm, total), prev);
    prev = schedule_multiplier(s, warm, total);
  }
}

TEST(AdamW, HandComputedFirstStep) {
  // m = 0.1 * 0.5, v = 0.001 * 0.25; bias-corrected m = 0.5, v = 0.25.
  // p = 1 * (1 - 0.1 * 0.01) - 0.1 * 0.5 / (0.5 + 1e-8) = 0.999 - 0.099999998
  Vector p = Vector::Constant(1, 1.0);
  AdamW opt(1);
  opt.step(p, Vector::Constant(1, 0.5), 0.1, 0.01);
  EXPECT_NEAR(p(0), 0.899000002, 1e-12);
  EXPECT_EQ(opt.steps, 1);
}

TEST(AdamW, ZeroGradientOnlyDecays) {
  Vector p(3);
  p << 1.0, -2.0, 0.5;
  const Vector before = p;
  AdamW opt(3);
  opt.step(p, Vector::Zero(3), 0.01, 0.1);
  EXPECT_LT((p - before * (1 - 0.01 * 0.1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BackwardUpdate, NonFiniteGradientIsTrainingError) {
  Scorer s = Scorer::random(Architecture::linear, 2, 1, 0, 1);
  AdamW opt(s.parameter_count());
  Matrix g = Matrix::Zero(1, 2);
  g(0, 1) = std::nan("");
  TrainConfig cfg;
  try {
    backward_update(s, g, Matrix::Ones(1, 2), opt, 5, 1, 10, cfg);
    FAIL();
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("step 5"), std::string::npos) << e.what();
  }
}

// Two well separated Gaussian blobs, fully labeled.
ObservedDataset separable(int n, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.d = 4;
  cfg.k = 1;
  cfg.class_priors = {0.5};
  cfg.label_keep_prob = {1.0};
  cfg.separation = 1e6;
  cfg.seed = seed;
  return generate(cfg);
}

TEST(Train, SeparableFullyLabeledPnReachesHighF1) {
  const auto ds = separable(2000, 3);
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 64;
  cfg.learning_rate = 0.05;
  const RiskSpec spec{Estimator::pn, false, {LossFamily::squared, LossForm::plain}};
  const auto r = train(ds, pri, spec, cfg);
  const auto rep = micro_prf(predict(r.scorer, ds.features, LossForm::plain), *ds.gold);
  EXPECT_GE(rep.micro_f1, 0.95);
}

TEST(Train, DeterministicAndFinalModel) {
  auto ds = separable(600, 4);
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 50;
  const RiskSpec spec{};
  const auto a = train(ds, pri, spec, cfg);
  const auto b = train(ds, pri, spec, cfg);
  EXPECT_TRUE(a.scorer == b.scorer);
  EXPECT_EQ(a.report.step_risks, b.report.step_risks);
  ASSERT_EQ(a.report.epochs.size(), 3u);
  EXPECT_EQ(a.report.epochs.back().parameter_norm, a.scorer.parameters().norm());
  EXPECT_EQ(a.report.total_steps, 3 * 12);
  EXPECT_EQ(a.report.epochs.back().schedule_end, 0.0);
  cfg.seed = 63;
  EXPECT_FALSE(train(ds, pri, spec, cfg).scorer == a.scorer);
}

TEST(Train, ZeroEpochsReturnsInitialScorer) {
  const auto ds = separable(100, 5);
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto r = train(ds, pri, RiskSpec{}, cfg);
  EXPECT_TRUE(r.scorer == Scorer::random(Architecture::linear, 4, 1, 0, cfg.seed));
  EXPECT_TRUE(r.report.epochs.empty());
}

TEST(Train, LastBatchAbsorbsRemainder) {
  const auto ds = separable(103, 6);
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 25;
  EXPECT_EQ(train(ds, pri, RiskSpec{}, cfg).report.total_steps, 4);
}

TEST(Train, DivergenceIsReportedWithPartialLog) {
  auto ds = separable(200, 7);
  ds.features(3, 1) = 1e308;  // overflows the forward pass
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 20;
  const auto r = train_with_report(ds, pri, RiskSpec{}, cfg);
  EXPECT_TRUE(r.report.diverged);
  EXPECT_FALSE(r.report.error.empty());
  EXPECT_TRUE(r.scorer.parameters().allFinite());
  EXPECT_THROW(train(ds, pri, RiskSpec{}, cfg), TrainingError);
}

TEST(Train, ReportJsonCarriesOptimizerConstants) {
  const auto ds = separable(100, 8);
  const auto pri = build_prior_config(estimate_labeled_prior(ds), 1.0);
  TrainConfig cfg;
  cfg.epochs = 1;
  const nlohmann::json j = train(ds, pri, RiskSpec{}, cfg).report;
  EXPECT_EQ(j.at("epochs").size(), 1u);
  EXPECT_TRUE(j.contains("optimizer"));
}

TEST(TrainConfig, ValidationAndJson) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.architecture = Architecture::mlp1;
  EXPECT_THROW(c.validate(), ConfigError);
  c.hidden_dim = 8;
  c.seed = 123456789012345ULL;
  const nlohmann::json j = c;
  const auto back = j.get<TrainConfig>();
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.hidden_dim, 8);
  EXPECT_EQ(back.architecture, Architecture::mlp1);
}

// Gradient of the batch risk with respect to every scorer parameter.
TEST(EndToEndGradient, ParametersMatchCentralDifferences) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4, k = 1 + trial % 3, n = 3 + trial % 4;
    const Matrix x = Matrix::NullaryExpr(n, d, [&] { return n01(rng); });
    SignMatrix obs = SignMatrix::Constant(n, k, kNegative);
    for (int c = 0; c < k; ++c) obs(c % (n - 1), c) = kPositive;
    std::vector<double> pi(static_cast<std::size_t>(k), 0.4), pl(static_cast<std::size_t>(k), 0.1);
    const auto pri = make_prior_config(pi, pl);
    for (auto arch : {Architecture::linear, Architecture::mlp1}) {
      const auto s = Scorer::random(arch, d, k, 3, static_cast<std::uint64_t>(trial));
      for (auto e : {Estimator::pn, Estimator::nnpu, Estimator::nnspu})
        for (auto fam : {LossFamily::squared, LossFamily::log_sigmoid})
          for (auto form : {LossForm::plain, LossForm::ranking}) {
            const RiskSpec spec{e, false, {fam, form, 0.25}};
            const auto base = assemble_risk(s.forward(x), obs, pri, spec);
            const Vector g = s.backward(x, base.gradient);
            bool kink = false;
            for (Eigen::Index i = 0; i < s.parameter_count() && !kink; ++i) {
              const double h = 1e-6;
              Scorer up = s, dn = s;
              up.parameters()(i) += h;
              dn.parameters()(i) -= h;
              const auto ru = assemble_risk(up.forward(x), obs, pri, spec).breakdown;
              const auto rd = assemble_risk(dn.forward(x), obs, pri, spec).breakdown;
              if (ru.clamp_active != base.breakdown.clamp_active || rd.clamp_active != base.breakdown.clamp_active) {
                kink = true;
                break;
              }
              const double num = (ru.total - rd.total) / (2 * h);
              EXPECT_LT(std::abs(num - g(i)) / std::max({std::abs(num), std::abs(g(i)), 1e-4}), 1e-4);
            }
            if (!kink) ++checked;
          }
    }
  }
  EXPECT_GT(checked, 400);
}

}  // namespace
}  // namespace ssrpu
