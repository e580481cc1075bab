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
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/types.hpp"

namespace ssrpu {

struct ClassCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Micro-averaged precision / recall / F1 pooled over every (instance, class)
/// cell, plus the mean none-class ranking loss when scores were supplied.
struct EvalReport {
  double micro_p = 0.0;
  double micro_r = 0.0;
  double micro_f1 = 0.0;
  std::vector<ClassCounts> per_class;
  double mean_l_na = 0.0;
};

void to_json(nlohmann::json& j, const EvalReport& r);

/// P = 0 without predicted positives, R = 0 without gold positives,
/// F1 = 0 when P + R = 0.
EvalReport micro_prf(const SignMatrix& predicted, const SignMatrix& gold);

/// Per instance: sum_i [y_i > 0][f_i < f_0] + [y_i <= 0][f_i > f_0] + 1/2 [f_i == f_0],
/// averaged over instances. Ties use exact comparison.
double na_metric(const Matrix& scores, const SignMatrix& gold);

}  // namespace ssrpu
