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

#include "ssrpu/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ssrpu/errors.hpp"

namespace ssrpu {

void SynthConfig::validate() const {
  if (n <= 0 || d <= 0 || k <= 0) throw DomainError("n, d and k must be positive");
  if (class_priors.size() != static_cast<std::size_t>(k))
    throw DomainError("need one class prior per class");
  for (std::size_t i = 0; i < class_priors.size(); ++i)
    if (!(class_priors[i] > 0.0 && class_priors[i] < 1.0))
      throw DomainError("class " + std::to_string(i) + ": prior must lie in (0, 1)");
  if (label_keep_prob.size() != 1 && label_keep_prob.size() != static_cast<std::size_t>(k))
    throw DomainError("label_keep_prob needs one entry or one per class");
  for (const double rho : label_keep_prob)
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("label_keep_prob entries must lie in [0, 1]");
  if (!(separation > 0.0)) throw DomainError("separation must be positive");
  if (cap_per_class && *cap_per_class < 1) throw DomainError("cap_per_class must be >= 1");
}

double SynthConfig::keep_prob(int cls) const {
  return label_keep_prob.size() == 1 ? label_keep_prob.front()
                                     : label_keep_prob[static_cast<std::size_t>(cls)];
}

void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = nlohmann::json{{"n", c.n},
                     {"d", c.d},
                     {"k", c.k},
                     {"seed", c.seed},
                     {"class_priors", c.class_priors},
                     {"label_keep_prob", c.label_keep_prob},
                     {"separation", c.separation}};
  j["cap_per_class"] = c.cap_per_class ? nlohmann::json(*c.cap_per_class) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SynthConfig& c) {
  SynthConfig d;
  c.n = j.value("n", d.n);
  c.d = j.value("d", d.d);
  c.k = j.value("k", d.k);
  c.seed = j.value("seed", d.seed);
  c.class_priors = j.value("class_priors", d.class_priors);
  c.label_keep_prob = j.value("label_keep_prob", d.label_keep_prob);
  c.separation = j.value("separation", d.separation);
  c.cap_per_class.reset();
  if (j.contains("cap_per_class") && !j.at("cap_per_class").is_null())
    c.cap_per_class = j.at("cap_per_class").get<int>();
}

namespace {

ObservedDataset plant(const SynthConfig& cfg, int rows) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix directions(cfg.k, cfg.d);
  for (int c = 0; c < cfg.k; ++c) {
    for (int j = 0; j < cfg.d; ++j) directions(c, j) = normal(rng);
    directions.row(c).normalize();
  }

  ObservedDataset out;
  out.class_count = cfg.k;
  out.features.resize(rows, cfg.d);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (int j = 0; j < cfg.d; ++j) out.features(r, j) = normal(rng);

  SignMatrix gold = SignMatrix::Constant(rows, cfg.k, kNegative);
  const double noise = 1.0 / cfg.separation;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  std::vector<double> latent(static_cast<std::size_t>(rows));
  for (int c = 0; c < cfg.k; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r)
      latent[static_cast<std::size_t>(r)] = out.features.row(r).dot(directions.row(c)) + noise * normal(rng);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto positives = static_cast<std::size_t>(
        std::llround(cfg.class_priors[static_cast<std::size_t>(c)] * static_cast<double>(rows)));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(positives), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const double la = latent[static_cast<std::size_t>(a)];
                        const double lb = latent[static_cast<std::size_t>(b)];
                        return la != lb ? la > lb : a < b;
                      });
    for (std::size_t i = 0; i < positives; ++i) gold(order[i], c) = kPositive;
  }

  out.observed = SignMatrix::Constant(rows, cfg.k, kNegative);
  for (int c = 0; c < cfg.k; ++c) {
    const double rho = cfg.keep_prob(c);
    for (Eigen::Index r = 0; r < rows; ++r)
      if (gold(r, c) == kPositive && uniform(rng) < rho) out.observed(r, c) = kPositive;
  }
  out.gold = std::move(gold);

  nlohmann::json config = cfg;
  out.provenance = {{"generator", "synthetic"}, {"config", config}};
  return out;
}

std::vector<Eigen::Index> range(Eigen::Index begin, Eigen::Index end) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(end - begin));
  std::iota(out.begin(), out.end(), begin);
  return out;
}

}  // namespace

ObservedDataset generate(const SynthConfig& cfg) { return generate_split(cfg, 0).train; }

SyntheticSplit generate_split(const SynthConfig& cfg, int holdout) {
  cfg.validate();
  if (holdout < 0) throw DomainError("holdout must be non-negative");
  ObservedDataset all = plant(cfg, cfg.n + holdout);
  SyntheticSplit split;
  if (holdout == 0) {
    split.train = std::move(all);
  } else {
    split.train = all.subset(range(0, cfg.n));
    split.test = all.subset(range(cfg.n, cfg.n + holdout));
    split.test.provenance["split"] = "test";
    split.train.provenance["split"] = "train";
  }
  if (cfg.cap_per_class) split.train = apply_cap(split.train, *cfg.cap_per_class, cfg.seed + 1);
  return split;
}

ObservedDataset apply_cap(const ObservedDataset& dataset, int cap, std::uint64_t seed) {
  if (cap < 1) throw DomainError("cap must be >= 1");
  ObservedDataset out = dataset;
  std::mt19937_64 rng(seed);
  for (int c = 0; c < dataset.class_count; ++c) {
    std::vector<Eigen::Index> labeled;
    for (Eigen::Index r = 0; r < dataset.size(); ++r)
      if (dataset.observed(r, c) == kPositive) labeled.push_back(r);
    if (labeled.size() <= static_cast<std::size_t>(cap)) continue;
    std::shuffle(labeled.begin(), labeled.end(), rng);
    for (std::size_t i = static_cast<std::size_t>(cap); i < labeled.size(); ++i)
      out.observed(labeled[i], c) = kNegative;
  }
  out.provenance["cap_per_class"] = cap;
  return out;
}

}  // namespace ssrpu
