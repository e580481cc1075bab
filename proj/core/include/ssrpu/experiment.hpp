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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/datagen.hpp"
#include "ssrpu/metrics.hpp"
#include "ssrpu/priors.hpp"
#include "ssrpu/risk.hpp"
#include "ssrpu/train.hpp"

namespace ssrpu {

/// Seeds used for multi-seed runs unless overridden.
inline const std::vector<std::uint64_t> kDefaultSeeds{62, 63, 64, 65, 66};

/// Everything needed to reproduce a train/eval run. Either a dataset file
/// pair or an inline synthetic config (with a held-out test split).
struct ExperimentConfig {
  std::optional<std::string> dataset_path;
  std::optional<std::string> test_path;
  SynthConfig synth;
  int holdout = 5000;

  RiskSpec risk;
  TrainConfig train;
  double multiplier = 3.0;
  double epsilon = kDefaultPriorEpsilon;
  /// Overall priors given directly; replaces the multiplier heuristic.
  std::optional<std::vector<double>> pi_override;

  std::vector<std::uint64_t> seeds = kDefaultSeeds;
  std::string output_dir = ".";

  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const RiskSpec& s);
void from_json(const nlohmann::json& j, RiskSpec& s);
void to_json(nlohmann::json& j, const PriorShiftConfig& p);

/// Estimates pi_labeled on `train` and builds the prior config from the
/// multiplier, or from `pi_override` when set.
PriorShiftConfig priors_for(const ObservedDataset& train, const ExperimentConfig& cfg);

/// Micro P/R/F1 and mean L_NA of `scorer` against the dataset's gold labels.
/// Throws DomainError when the dataset has no gold labels.
EvalReport evaluate(const Scorer& scorer, const ObservedDataset& dataset, LossForm form);

/// One CSV line: run_id,estimator,loss,margin,multiplier,seed,P,R,F1,L_NA.
/// Failed cells carry nan metrics.
struct RunRow {
  std::string run_id;
  Estimator estimator = Estimator::nnspu;
  std::string loss;
  double margin = 0.0;
  double multiplier = 0.0;
  std::uint64_t seed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double l_na = 0.0;
  bool failed = false;
  std::string error;
};

std::string_view csv_header();
std::string to_csv(const RunRow& row);
RunRow parse_csv_row(std::string_view line);

struct RunOutcome {
  RunRow row;
  PriorShiftConfig priors;
  TrainResult training;
  EvalReport eval;
};

/// Trains on `train` with cfg.train.seed replaced by `seed`, evaluates on
/// `test`. Divergence is recorded in the row and the training report.
RunOutcome run_single(const ObservedDataset& train, const ObservedDataset& test,
                      const ExperimentConfig& cfg, std::uint64_t seed, std::string run_id);

/// Generates the synthetic split for `seed` and runs it.
RunOutcome run_synthetic(const ExperimentConfig& cfg, std::uint64_t seed, std::string run_id);

enum class SweepAxis { margin, multiplier, keep_prob };
SweepAxis parse_sweep_axis(std::string_view text);
std::string_view to_string(SweepAxis axis);

ExperimentConfig with_axis_value(ExperimentConfig cfg, SweepAxis axis, double value);

/// One row per (value, seed), values outer. Failed cells are marked and the
/// sweep continues. Cells run on up to `jobs` threads; row order is fixed.
std::vector<RunRow> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values,
                          int jobs = 1);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

struct RunSummary {
  MeanStd precision, recall, f1, l_na;
  std::size_t runs = 0;
  std::size_t failed = 0;
};

/// Mean and sample standard deviation over non-failed rows.
RunSummary summarize(const std::vector<RunRow>& rows);

}  // namespace ssrpu
