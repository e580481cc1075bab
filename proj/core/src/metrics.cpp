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

#include "ssrpu/metrics.hpp"

#include "ssrpu/errors.hpp"

namespace ssrpu {

void to_json(nlohmann::json& j, const EvalReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.per_class) classes.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}});
  j = nlohmann::json{{"micro_p", r.micro_p},
                     {"micro_r", r.micro_r},
                     {"micro_f1", r.micro_f1},
                     {"per_class", classes},
                     {"mean_l_na", r.mean_l_na}};
}

EvalReport micro_prf(const SignMatrix& predicted, const SignMatrix& gold) {
  if (predicted.rows() != gold.rows() || predicted.cols() != gold.cols())
    throw DomainError("prediction and gold shapes differ");
  EvalReport report;
  report.per_class.resize(static_cast<std::size_t>(gold.cols()));
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index c = 0; c < gold.cols(); ++c) {
    auto& counts = report.per_class[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < gold.rows(); ++r) {
      const bool p = predicted(r, c) == kPositive;
      const bool g = gold(r, c) == kPositive;
      counts.tp += p && g;
      counts.fp += p && !g;
      counts.fn += !p && g;
    }
    tp += counts.tp;
    fp += counts.fp;
    fn += counts.fn;
  }
  report.micro_p = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  report.micro_r = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double sum = report.micro_p + report.micro_r;
  report.micro_f1 = sum > 0.0 ? 2.0 * report.micro_p * report.micro_r / sum : 0.0;
  return report;
}

double na_metric(const Matrix& scores, const SignMatrix& gold) {
  if (scores.rows() != gold.rows() || scores.cols() != gold.cols() + 1)
    throw DomainError("scores must be n x (K + 1) for gold n x K");
  if (gold.rows() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index r = 0; r < gold.rows(); ++r) {
    double loss = 0.0;
    const double f0 = scores(r, 0);
    for (Eigen::Index c = 0; c < gold.cols(); ++c) {
      const double fi = scores(r, c + 1);
      if (fi == f0)
        loss += 0.5;
      else if (gold(r, c) > 0 ? fi < f0 : fi > f0)
        loss += 1.0;
    }
    total += loss;
  }
  return total / static_cast<double>(gold.rows());
}

}  // namespace ssrpu
