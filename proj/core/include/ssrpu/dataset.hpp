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

#include <nlohmann/json.hpp>

#include "ssrpu/types.hpp"

namespace ssrpu {

/// Features plus observed (s) and optional gold (y) labels for n instances and
/// K classes. Observed positives are always gold positives: labels may be
/// missing but never wrong.
struct ObservedDataset {
  Matrix features;                  // n x d
  SignMatrix observed;              // n x K, +1 labeled, -1 unlabeled
  std::optional<SignMatrix> gold;   // n x K, +1 / -1
  int class_count = 0;
  nlohmann::json provenance = nlohmann::json::object();

  Eigen::Index size() const noexcept { return features.rows(); }
  Eigen::Index dim() const noexcept { return features.cols(); }
  bool has_gold() const noexcept { return gold.has_value(); }

  /// Throws DomainError if shapes disagree, entries are not signs, or a
  /// labeled entry has a negative gold label.
  void validate() const;

  /// Rows `rows` in the given order, provenance copied.
  ObservedDataset subset(std::span<const Eigen::Index> rows) const;
};

bool operator==(const ObservedDataset& a, const ObservedDataset& b);

/// Instance indices labeled positive / unlabeled for one class.
struct ClassPartition {
  std::vector<Eigen::Index> positives;
  std::vector<Eigen::Index> unlabeled;

  std::size_t n_positive() const noexcept { return positives.size(); }
  std::size_t n_unlabeled() const noexcept { return unlabeled.size(); }
};

/// Splits the rows of `labels` by the sign in column `cls`.
ClassPartition partition_class(const SignMatrix& labels, int cls);
std::vector<ClassPartition> partition_classes(const SignMatrix& labels);

}  // namespace ssrpu
