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

#include "ssrpu/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ssrpu/errors.hpp"

namespace ssrpu {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be positive");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw ConfigError("warmup_fraction must lie in [0, 1)");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be non-negative");
  if (architecture == Architecture::mlp1 && hidden_dim <= 0)
    throw ConfigError("mlp1 needs hidden_dim > 0");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"learning_rate", c.learning_rate}, {"warmup_fraction", c.warmup_fraction},
                     {"epochs", c.epochs},               {"batch_size", c.batch_size},
                     {"weight_decay", c.weight_decay},   {"seed", c.seed},
                     {"architecture", to_string(c.architecture)},
                     {"hidden_dim", c.hidden_dim}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.warmup_fraction = j.value("warmup_fraction", d.warmup_fraction);
  c.epochs = j.value("epochs", d.epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.seed = j.value("seed", d.seed);
  c.architecture = parse_architecture(j.value("architecture", std::string("linear")));
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
}

std::int64_t warmup_steps_for(double warmup_fraction, std::int64_t total_steps) {
  return static_cast<std::int64_t>(std::floor(warmup_fraction * static_cast<double>(total_steps)));
}

double schedule_multiplier(std::int64_t step, std::int64_t warmup_steps, std::int64_t total_steps) {
  if (step < warmup_steps) return static_cast<double>(step) / static_cast<double>(warmup_steps);
  if (total_steps <= warmup_steps) return 0.0;
  return std::max(0.0, static_cast<double>(total_steps - step) /
                           static_cast<double>(total_steps - warmup_steps));
}

AdamW::AdamW(Eigen::Index parameter_count)
    : first_moment(Vector::Zero(parameter_count)), second_moment(Vector::Zero(parameter_count)) {}

void AdamW::step(Vector& params, const Vector& grad, double lr, double weight_decay) {
  ++steps;
  first_moment = kBeta1 * first_moment + (1.0 - kBeta1) * grad;
  second_moment = kBeta2 * second_moment + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps));
  const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps));
  params *= 1.0 - lr * weight_decay;
  params.array() -= lr * (first_moment.array() / bias1) /
                    ((second_moment.array() / bias2).sqrt() + kEpsilon);
}

void backward_update(Scorer& scorer, const Matrix& score_gradient, const Matrix& features,
                     AdamW& optimizer, std::int64_t step, std::int64_t warmup_steps,
                     std::int64_t total_steps, const TrainConfig& cfg) {
  const Vector grad = scorer.backward(features, score_gradient);
  if (!grad.allFinite()) {
    std::ostringstream os;
    os << "non-finite parameter gradient at step " << step;
    throw TrainingError(os.str());
  }
  const double lr = cfg.learning_rate * schedule_multiplier(step, warmup_steps, total_steps);
  optimizer.step(scorer.parameters(), grad, lr, cfg.weight_decay);
}

void to_json(nlohmann::json& j, const TrainReport& r) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : r.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"mean_risk", e.mean_risk},
                      {"clamp_fraction", e.clamp_fraction},
                      {"min_clamped_term", e.min_clamped_term},
                      {"schedule_end", e.schedule_end},
                      {"parameter_norm", e.parameter_norm}});
  j = nlohmann::json{{"epochs", epochs},
                     {"step_risks", r.step_risks},
                     {"total_steps", r.total_steps},
                     {"warmup_steps", r.warmup_steps},
                     {"nonnegativity_violations", r.nonnegativity_violations},
                     {"clamp_activations", r.clamp_activations},
                     {"diverged", r.diverged},
                     {"optimizer", {{"name", "adamw"},
                                    {"beta1", AdamW::kBeta1},
                                    {"beta2", AdamW::kBeta2},
                                    {"epsilon", AdamW::kEpsilon}}}};
  if (!r.error.empty()) j["error"] = r.error;
}

namespace {

std::string clamp_state(const RiskBreakdown& b) {
  std::ostringstream os;
  os << "clamp=[";
  for (std::size_t i = 0; i < b.clamp_active.size(); ++i) os << (i ? "," : "") << (b.clamp_active[i] ? 1 : 0);
  os << "]";
  return os.str();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> batch_bounds(Eigen::Index n, int batch_size) {
  // The last batch absorbs the remainder so no batch is smaller than batch_size
  // (unless the whole dataset is).
  const Eigen::Index count = std::max<Eigen::Index>(1, n / batch_size);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index b = 0; b < count; ++b) {
    const Eigen::Index begin = b * batch_size;
    const Eigen::Index end = b + 1 == count ? n : begin + batch_size;
    out.emplace_back(begin, end);
  }
  return out;
}

}  // namespace

TrainResult train_with_report(const ObservedDataset& dataset, const PriorShiftConfig& priors,
                              const RiskSpec& risk_spec, const TrainConfig& cfg,
                              std::optional<Scorer> initial) {
  cfg.validate();
  risk_spec.validate();
  dataset.validate();
  if (dataset.size() == 0) throw DomainError("cannot train on an empty dataset");
  if (priors.class_count() != static_cast<std::size_t>(dataset.class_count))
    throw DomainError("prior config and dataset disagree on class count");

  TrainResult result;
  result.scorer = initial ? std::move(*initial)
                          : Scorer::random(cfg.architecture, static_cast<int>(dataset.dim()),
                                           dataset.class_count, cfg.hidden_dim, cfg.seed);
  auto& report = result.report;
  const auto bounds = batch_bounds(dataset.size(), cfg.batch_size);
  report.total_steps = static_cast<std::int64_t>(bounds.size()) * cfg.epochs;
  report.warmup_steps = warmup_steps_for(cfg.warmup_fraction, report.total_steps);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dataset.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x5bd1e995ULL);
  AdamW optimizer(result.scorer.parameter_count());
  const auto classes = static_cast<std::size_t>(dataset.class_count);
  const bool clamping = risk_spec.estimator != Estimator::pn;

  std::int64_t step = 0;
  Matrix features;
  SignMatrix observed;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochLog log;
    log.epoch = epoch;
    log.clamp_fraction.assign(classes, 0.0);
    log.min_clamped_term = std::numeric_limits<double>::infinity();
    double risk_sum = 0.0;
    for (const auto& [begin, end] : bounds) {
      const Eigen::Index rows = end - begin;
      features.resize(rows, dataset.dim());
      observed.resize(rows, dataset.class_count);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const auto src = order[static_cast<std::size_t>(begin + i)];
        features.row(i) = dataset.features.row(src);
        observed.row(i) = dataset.observed.row(src);
      }
      const Matrix scores = result.scorer.forward(features);
      const RiskResult risk = assemble_risk(scores, observed, priors, risk_spec);
      const auto& b = risk.breakdown;
      if (!std::isfinite(b.total) || !risk.gradient.allFinite()) {
        std::ostringstream os;
        os << "risk diverged at step " << step << " (epoch " << epoch << "), " << clamp_state(b);
        report.diverged = true;
        report.error = os.str();
        return result;
      }
      for (std::size_t c = 0; c < classes; ++c) {
        const double clamped = b.clamp_active[c] ? 0.0 : b.negative_term_raw[c];
        if (clamping && clamped < 0.0) ++report.nonnegativity_violations;
        log.min_clamped_term = std::min(log.min_clamped_term, clamped);
        if (b.clamp_active[c]) {
          log.clamp_fraction[c] += 1.0;
          ++report.clamp_activations;
        }
      }
      report.step_risks.push_back(b.total);
      risk_sum += b.total;
      try {
        backward_update(result.scorer, risk.gradient, features, optimizer, step, report.warmup_steps,
                        report.total_steps, cfg);
      } catch (const TrainingError& e) {
        report.diverged = true;
        report.error = std::string(e.what()) + ", " + clamp_state(b);
        return result;
      }
      ++step;
    }
    const auto batches = static_cast<double>(bounds.size());
    log.mean_risk = risk_sum / batches;
    for (auto& f : log.clamp_fraction) f /= batches;
    log.schedule_end = schedule_multiplier(step, report.warmup_steps, report.total_steps);
    log.parameter_norm = result.scorer.parameters().norm();
    report.epochs.push_back(std::move(log));
  }
  return result;
}

TrainResult train(const ObservedDataset& dataset, const PriorShiftConfig& priors,
                  const RiskSpec& risk_spec, const TrainConfig& cfg) {
  TrainResult r = train_with_report(dataset, priors, risk_spec, cfg);
  if (r.report.diverged) throw TrainingError(r.report.error);
  return r;
}

}  // namespace ssrpu
