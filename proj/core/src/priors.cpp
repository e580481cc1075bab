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

#include "ssrpu/priors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssrpu/errors.hpp"

namespace ssrpu {
namespace {

std::string class_tag(std::optional<int> cls) {
  return cls ? "class " + std::to_string(*cls) + ": " : std::string();
}

}  // namespace

double derive_unlabeled_prior(double pi, double pi_labeled, std::optional<int> cls) {
  if (!(pi > 0.0 && pi < 1.0) || !(pi_labeled >= 0.0 && pi_labeled <= pi) || !(pi_labeled < 1.0)) {
    std::ostringstream os;
    os << class_tag(cls) << "require 0 < pi < 1 and 0 <= pi_labeled <= pi, got pi=" << pi
       << " pi_labeled=" << pi_labeled;
    throw DomainError(os.str());
  }
  return (pi - pi_labeled) / (1.0 - pi_labeled);
}

std::vector<double> estimate_labeled_prior(const ObservedDataset& dataset) {
  if (dataset.size() == 0) throw DomainError("cannot estimate priors from an empty dataset");
  std::vector<double> out(static_cast<std::size_t>(dataset.class_count), 0.0);
  for (int c = 0; c < dataset.class_count; ++c) {
    const auto labeled = (dataset.observed.col(c).array() == kPositive).count();
    out[static_cast<std::size_t>(c)] =
        static_cast<double>(labeled) / static_cast<double>(dataset.size());
  }
  return out;
}

PriorShiftConfig build_prior_config(std::span<const double> pi_labeled, double multiplier,
                                    double epsilon) {
  if (!(multiplier >= 1.0)) throw DomainError("prior multiplier must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("prior epsilon must lie in (0, 0.5)");
  PriorShiftConfig cfg;
  cfg.multiplier = multiplier;
  for (std::size_t i = 0; i < pi_labeled.size(); ++i) {
    double labeled = pi_labeled[i];
    if (!(labeled >= 0.0 && labeled <= 1.0))
      throw DomainError(class_tag(static_cast<int>(i)) + "pi_labeled must lie in [0, 1]");
    double pi = labeled == 0.0 ? epsilon : std::min(multiplier * labeled, 1.0 - epsilon);
    // Only reachable for classes labeled on more than 1 - epsilon of instances.
    labeled = std::min(labeled, pi);
    cfg.pi.push_back(pi);
    cfg.pi_labeled.push_back(labeled);
    cfg.pi_u.push_back(derive_unlabeled_prior(pi, labeled, static_cast<int>(i)));
  }
  return cfg;
}

PriorShiftConfig make_prior_config(std::span<const double> pi, std::span<const double> pi_labeled) {
  if (pi.size() != pi_labeled.size())
    throw DomainError("pi and pi_labeled must have one entry per class");
  PriorShiftConfig cfg;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double labeled = std::min(pi_labeled[i], pi[i]);
    cfg.pi.push_back(pi[i]);
    cfg.pi_labeled.push_back(labeled);
    cfg.pi_u.push_back(derive_unlabeled_prior(pi[i], labeled, static_cast<int>(i)));
  }
  return cfg;
}

void PriorShiftConfig::validate() const {
  if (pi.size() != pi_labeled.size() || pi.size() != pi_u.size())
    throw DomainError("prior vectors must have one entry per class");
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double expected = derive_unlabeled_prior(pi[i], pi_labeled[i], static_cast<int>(i));
    if (!std::isfinite(pi_u[i]) || pi_u[i] < 0.0 || pi_u[i] >= 1.0 ||
        std::abs(pi_u[i] - expected) > 1e-12) {
      std::ostringstream os;
      os << "class " << i << ": pi_u=" << pi_u[i] << " inconsistent with pi=" << pi[i]
         << " pi_labeled=" << pi_labeled[i];
      throw DomainError(os.str());
    }
  }
}

double class_weight(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw DomainError("class weight requires 0 < pi < 1");
  return std::sqrt((1.0 - pi) / pi);
}

}  // namespace ssrpu
