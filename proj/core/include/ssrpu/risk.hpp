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

#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/dataset.hpp"
#include "ssrpu/losses.hpp"
#include "ssrpu/priors.hpp"
#include "ssrpu/types.hpp"

namespace ssrpu {

/// PN treats unlabeled as negative; nnPU is the non-negative PU estimator;
/// nnSPU is the non-negative PU estimator corrected for the prior shift of
/// the unlabeled pool.
enum class Estimator { pn, nnpu, nnspu };

std::string_view to_string(Estimator estimator);
Estimator parse_estimator(std::string_view text);

struct RiskSpec {
  Estimator estimator = Estimator::nnspu;
  /// Multiply the positive-label term of class i by ((1 - pi_i) / pi_i)^0.5.
  bool class_weighting = false;
  LossSpec loss;

  void validate() const { loss.validate(); }
};

/// Per-class pieces of an empirical risk. For nnPU and nnSPU,
/// total = sum_i (positive_term[i] + max(0, negative_term_raw[i])).
struct RiskBreakdown {
  double total = 0.0;
  std::vector<double> positive_term;      // already weighted by gamma when enabled
  std::vector<double> negative_term_raw;  // before clamping
  std::vector<bool> clamp_active;

  std::size_t clamp_count() const;
};

void to_json(nlohmann::json& j, const RiskBreakdown& b);

struct RiskResult {
  RiskBreakdown breakdown;
  Matrix gradient;  // d risk / d scores, n x (K + 1), column 0 is f_0
};

/// Ordinary supervised risk. `labels` are fully observed signs; every -1 is a
/// negative.
RiskResult pn_risk(const Matrix& scores, const SignMatrix& labels, const PriorShiftConfig& priors,
                   const RiskSpec& spec);

/// Non-negative PU risk. Throws DomainError if a class has no unlabeled rows.
RiskResult nnpu_risk(const Matrix& scores, std::span<const ClassPartition> partitions,
                     const PriorShiftConfig& priors, const RiskSpec& spec);

/// Non-negative PU risk under prior shift of the unlabeled pool.
RiskResult nnspu_risk(const Matrix& scores, std::span<const ClassPartition> partitions,
                      const PriorShiftConfig& priors, const RiskSpec& spec);

/// Partitions `observed` per class and routes to the estimator in `spec`.
RiskResult assemble_risk(const Matrix& scores, const SignMatrix& observed,
                         const PriorShiftConfig& priors, const RiskSpec& spec);

}  // namespace ssrpu
