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
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/dataset.hpp"

namespace ssrpu {

/// Planted multi-label concept with controllable priors and label censoring.
struct SynthConfig {
  int n = 20000;
  int d = 32;
  int k = 4;
  std::uint64_t seed = 62;
  std::vector<double> class_priors{0.3, 0.2, 0.1, 0.05};
  /// Each gold positive of class i is labeled independently with this
  /// probability. One entry per class, or a single entry for all classes.
  std::vector<double> label_keep_prob{1.0 / 3.0};
  /// Noise on the planted score has standard deviation 1 / separation.
  double separation = 4.0;
  std::optional<int> cap_per_class;

  void validate() const;
  double keep_prob(int cls) const;
};

void to_json(nlohmann::json& j, const SynthConfig& c);
void from_json(const nlohmann::json& j, SynthConfig& c);

/// Gaussian features; per class a random unit direction w_i and gold
/// y_i = +1 for the top round(pi_i * n) instances of w_i . x + noise. Gold
/// positives are labeled with probability rho_i, then the optional cap is
/// applied. Gold is kept in the result.
ObservedDataset generate(const SynthConfig& cfg);

struct SyntheticSplit {
  ObservedDataset train;
  ObservedDataset test;
};

/// Draws cfg.n + holdout instances from one planted concept and splits off
/// the last `holdout` as a test set. The cap applies to the training part only.
SyntheticSplit generate_split(const SynthConfig& cfg, int holdout);

/// Keeps at most `cap` labeled positives per class, chosen uniformly with a
/// seeded generator; the rest become unlabeled. Gold is untouched.
ObservedDataset apply_cap(const ObservedDataset& dataset, int cap, std::uint64_t seed);

}  // namespace ssrpu
