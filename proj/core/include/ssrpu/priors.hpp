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

#include <optional>
#include <span>
#include <vector>

#include "ssrpu/dataset.hpp"

namespace ssrpu {

inline constexpr double kDefaultPriorEpsilon = 0.01;

/// Per-class priors after labeling: the overall positive prior pi, the
/// labeled prior pi_labeled = p(s = +1), and the positive prior of the
/// unlabeled pool pi_u = p(y = +1 | s = -1).
struct PriorShiftConfig {
  std::vector<double> pi;
  std::vector<double> pi_labeled;
  std::vector<double> pi_u;
  double multiplier = 1.0;  // provenance only

  std::size_t class_count() const noexcept { return pi.size(); }

  /// Checks lengths, ranges and pi_u = (pi - pi_labeled) / (1 - pi_labeled).
  void validate() const;
};

/// (pi - pi_labeled) / (1 - pi_labeled). `cls` only decorates error messages.
double derive_unlabeled_prior(double pi, double pi_labeled, std::optional<int> cls = std::nullopt);

/// Fraction of instances labeled positive, per class.
std::vector<double> estimate_labeled_prior(const ObservedDataset& dataset);

/// pi_i = min(multiplier * pi_labeled_i, 1 - epsilon). Classes never labeled
/// get pi_i = epsilon with pi_labeled_i = 0, so they train as ordinary PU.
PriorShiftConfig build_prior_config(std::span<const double> pi_labeled, double multiplier,
                                    double epsilon = kDefaultPriorEpsilon);

/// Explicit overall priors instead of the multiplier heuristic. pi_labeled is
/// capped at pi for each class.
PriorShiftConfig make_prior_config(std::span<const double> pi, std::span<const double> pi_labeled);

/// gamma = ((1 - pi) / pi)^0.5, the class-imbalance weight on the positive term.
double class_weight(double pi);

}  // namespace ssrpu
