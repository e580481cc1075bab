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
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/dataset.hpp"
#include "ssrpu/priors.hpp"
#include "ssrpu/risk.hpp"
#include "ssrpu/scorer.hpp"

namespace ssrpu {

struct TrainConfig {
  double learning_rate = 1e-2;
  double warmup_fraction = 0.06;
  int epochs = 10;
  int batch_size = 256;
  double weight_decay = 0.0;
  std::uint64_t seed = 62;
  Architecture architecture = Architecture::linear;
  int hidden_dim = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Linear warmup over the first `warmup_steps` updates, then linear decay to
/// zero at `total_steps`. `step` counts updates already taken.
double schedule_multiplier(std::int64_t step, std::int64_t warmup_steps, std::int64_t total_steps);

/// floor(warmup_fraction * total_steps)
std::int64_t warmup_steps_for(double warmup_fraction, std::int64_t total_steps);

/// Adaptive-moment optimizer with decoupled weight decay.
struct AdamW {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  Vector first_moment;
  Vector second_moment;
  std::int64_t steps = 0;

  explicit AdamW(Eigen::Index parameter_count = 0);

  /// One update with effective learning rate `lr` (already scheduled).
  void step(Vector& params, const Vector& grad, double lr, double weight_decay);
};

/// Applies one scheduled optimizer step to the scorer. Throws TrainingError
/// if the gradient is not finite.
void backward_update(Scorer& scorer, const Matrix& score_gradient, const Matrix& features,
                     AdamW& optimizer, std::int64_t step, std::int64_t warmup_steps,
                     std::int64_t total_steps, const TrainConfig& cfg);

struct EpochLog {
  int epoch = 0;
  double mean_risk = 0.0;
  /// Per class, the fraction of batches in which the non-negative clamp fired.
  std::vector<double> clamp_fraction;
  /// Smallest per-class clamped negative term seen in the epoch (>= 0 by construction).
  double min_clamped_term = 0.0;
  double schedule_end = 0.0;
  double parameter_norm = 0.0;
};

struct TrainReport {
  std::vector<EpochLog> epochs;
  /// Batch risk before every update, in order.
  std::vector<double> step_risks;
  std::int64_t total_steps = 0;
  std::int64_t warmup_steps = 0;
  std::size_t nonnegativity_violations = 0;
  std::size_t clamp_activations = 0;
  bool diverged = false;
  std::string error;
};

void to_json(nlohmann::json& j, const TrainReport& r);

struct TrainResult {
  Scorer scorer;
  TrainReport report;
};

/// Fixed-epoch mini-batch training on the observed labels. Returns the
/// final-epoch scorer. On divergence throws TrainingError; use
/// `train_with_report` to keep the partial report.
TrainResult train(const ObservedDataset& dataset, const PriorShiftConfig& priors,
                  const RiskSpec& risk_spec, const TrainConfig& cfg);

/// Like `train`, but divergence is reported in `report.diverged` instead of
/// thrown. The returned scorer is the last finite one.
TrainResult train_with_report(const ObservedDataset& dataset, const PriorShiftConfig& priors,
                              const RiskSpec& risk_spec, const TrainConfig& cfg,
                              std::optional<Scorer> initial = std::nullopt);

}  // namespace ssrpu
