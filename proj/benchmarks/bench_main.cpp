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

#include <benchmark/benchmark.h>

#include "ssrpu/datagen.hpp"
#include "ssrpu/priors.hpp"
#include "ssrpu/risk.hpp"
#include "ssrpu/scorer.hpp"
#include "ssrpu/train.hpp"

namespace {

using namespace ssrpu;

const ObservedDataset& dataset() {
  static const ObservedDataset data = [] {
    SynthConfig cfg;
    cfg.n = 4096;
    return generate(cfg);
  }();
  return data;
}

PriorShiftConfig priors() { return build_prior_config(estimate_labeled_prior(dataset()), 3.0); }

void BM_AssembleRisk(benchmark::State& state) {
  const auto& data = dataset();
  const auto rows = static_cast<Eigen::Index>(state.range(0));
  const Scorer scorer = Scorer::random(Architecture::linear, static_cast<int>(data.dim()), data.class_count, 0, 62);
  const Matrix scores = scorer.forward(data.features.topRows(rows));
  const SignMatrix observed = data.observed.topRows(rows);
  const auto p = priors();
  const RiskSpec spec{Estimator::nnspu, false, {LossFamily::squared, LossForm::ranking, 0.25}};
  for (auto _ : state) benchmark::DoNotOptimize(assemble_risk(scores, observed, p, spec));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_AssembleRisk)->Arg(256)->Arg(4096);

void BM_ForwardBackward(benchmark::State& state) {
  const auto& data = dataset();
  const auto arch = state.range(0) ? Architecture::mlp1 : Architecture::linear;
  const Scorer scorer = Scorer::random(arch, static_cast<int>(data.dim()), data.class_count, 64, 62);
  const Matrix x = data.features.topRows(256);
  const Matrix g = Matrix::Ones(256, data.class_count + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scorer.forward(x));
    benchmark::DoNotOptimize(scorer.backward(x, g));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1);

void BM_TrainEpoch(benchmark::State& state) {
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto p = priors();
  const RiskSpec spec{Estimator::nnspu, false, {LossFamily::squared, LossForm::ranking, 0.25}};
  for (auto _ : state) benchmark::DoNotOptimize(train(dataset(), p, spec, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dataset().features.rows()));
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
