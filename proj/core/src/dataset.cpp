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

#include "ssrpu/dataset.hpp"

#include <string>

#include "ssrpu/errors.hpp"

namespace ssrpu {
namespace {

bool all_signs(const SignMatrix& m) {
  return ((m.array() == kPositive) || (m.array() == kNegative)).all();
}

}  // namespace

void ObservedDataset::validate() const {
  if (class_count <= 0) throw DomainError("class_count must be positive");
  if (observed.rows() != features.rows())
    throw DomainError("observed has " + std::to_string(observed.rows()) + " rows, features has " +
                      std::to_string(features.rows()));
  if (observed.cols() != class_count)
    throw DomainError("observed has " + std::to_string(observed.cols()) + " columns, expected " +
                      std::to_string(class_count));
  if (!all_signs(observed)) throw DomainError("observed entries must be +1 or -1");
  if (!gold) return;
  if (gold->rows() != features.rows() || gold->cols() != class_count)
    throw DomainError("gold shape does not match observed shape");
  if (!all_signs(*gold)) throw DomainError("gold entries must be +1 or -1");
  for (Eigen::Index r = 0; r < observed.rows(); ++r)
    for (Eigen::Index c = 0; c < class_count; ++c)
      if (observed(r, c) == kPositive && (*gold)(r, c) != kPositive)
        throw DomainError("instance " + std::to_string(r) + " is labeled for class " +
                          std::to_string(c) + " but its gold label is negative");
}

ObservedDataset ObservedDataset::subset(std::span<const Eigen::Index> rows) const {
  ObservedDataset out;
  out.class_count = class_count;
  out.provenance = provenance;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.features.resize(n, features.cols());
  out.observed.resize(n, observed.cols());
  if (gold) out.gold = SignMatrix(n, gold->cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = rows[static_cast<std::size_t>(i)];
    out.features.row(i) = features.row(r);
    out.observed.row(i) = observed.row(r);
    if (gold) out.gold->row(i) = gold->row(r);
  }
  return out;
}

bool operator==(const ObservedDataset& a, const ObservedDataset& b) {
  if (a.class_count != b.class_count) return false;
  if (a.features.rows() != b.features.rows() || a.features.cols() != b.features.cols()) return false;
  if (a.observed.rows() != b.observed.rows() || a.observed.cols() != b.observed.cols()) return false;
  if (a.features != b.features || a.observed != b.observed) return false;
  if (a.gold.has_value() != b.gold.has_value()) return false;
  if (a.gold && (a.gold->rows() != b.gold->rows() || *a.gold != *b.gold)) return false;
  return true;
}

ClassPartition partition_class(const SignMatrix& labels, int cls) {
  if (cls < 0 || cls >= labels.cols()) throw DomainError("class index out of range");
  ClassPartition p;
  for (Eigen::Index r = 0; r < labels.rows(); ++r) {
    if (labels(r, cls) == kPositive)
      p.positives.push_back(r);
    else
      p.unlabeled.push_back(r);
  }
  return p;
}

std::vector<ClassPartition> partition_classes(const SignMatrix& labels) {
  std::vector<ClassPartition> out;
  out.reserve(static_cast<std::size_t>(labels.cols()));
  for (int c = 0; c < labels.cols(); ++c) out.push_back(partition_class(labels, c));
  return out;
}

}  // namespace ssrpu
