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

#include "ssrpu/losses.hpp"

#include <cmath>

#include "ssrpu/errors.hpp"

namespace ssrpu {
namespace {

double sq_rank_unchecked(double gap, int y, double margin) {
  const double r = y * gap - margin;
  return 0.25 * r * r;
}

double sq_rank_grad_unchecked(double gap, int y, double margin) {
  return 0.5 * y * (y * gap - margin);
}

void require_margin(double margin) {
  if (margin == 0.0) throw ConfigError("squared ranking loss requires margin != 0");
}

}  // namespace

void LossSpec::validate() const {
  if (!std::isfinite(margin)) throw ConfigError("margin must be finite");
  if (family == LossFamily::squared && form == LossForm::ranking && margin == 0.0 &&
      !allow_zero_margin)
    throw ConfigError("squared ranking loss requires margin != 0");
}

std::string LossSpec::name() const {
  std::string out(to_string(family));
  if (form == LossForm::ranking) out += "-ranking";
  return out;
}

std::string_view to_string(LossFamily family) {
  return family == LossFamily::squared ? "squared" : "log-sigmoid";
}

std::string_view to_string(LossForm form) { return form == LossForm::plain ? "plain" : "ranking"; }

LossFamily parse_loss_family(std::string_view text) {
  if (text == "squared") return LossFamily::squared;
  if (text == "log-sigmoid" || text == "log_sigmoid") return LossFamily::log_sigmoid;
  throw ConfigError("unknown loss family '" + std::string(text) + "'");
}

LossForm parse_loss_form(std::string_view text) {
  if (text == "plain") return LossForm::plain;
  if (text == "ranking") return LossForm::ranking;
  throw ConfigError("unknown loss form '" + std::string(text) + "'");
}

double softplus(double x) {
  // max(x, 0) + log1p(exp(-|x|))
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double squared_loss(double f, int y) {
  const double r = y * f - 1.0;
  return 0.25 * r * r;
}

double squared_loss_grad(double f, int y) { return 0.5 * y * (y * f - 1.0); }

double squared_ranking_loss(double f_i, double f_0, int y, double margin) {
  require_margin(margin);
  return sq_rank_unchecked(f_i - f_0, y, margin);
}

LossGrad squared_ranking_loss_grad(double f_i, double f_0, int y, double margin) {
  require_margin(margin);
  const double g = sq_rank_grad_unchecked(f_i - f_0, y, margin);
  return {g, -g};
}

double log_sigmoid_loss(double f, int y) { return softplus(-y * f); }

double log_sigmoid_loss_grad(double f, int y) { return -y * sigmoid(-y * f); }

double log_sigmoid_ranking_loss(double f_i, double f_0, int y) { return softplus(-y * (f_i - f_0)); }

LossGrad log_sigmoid_ranking_loss_grad(double f_i, double f_0, int y) {
  const double g = -y * sigmoid(-y * (f_i - f_0));
  return {g, -g};
}

LossEval evaluate_loss(const LossSpec& spec, double f_i, double f_0, int y) {
  if (spec.form == LossForm::plain) {
    if (spec.family == LossFamily::squared)
      return {squared_loss(f_i, y), {squared_loss_grad(f_i, y), 0.0}};
    return {log_sigmoid_loss(f_i, y), {log_sigmoid_loss_grad(f_i, y), 0.0}};
  }
  const double gap = f_i - f_0;
  if (spec.family == LossFamily::squared) {
    const double g = sq_rank_grad_unchecked(gap, y, spec.margin);
    return {sq_rank_unchecked(gap, y, spec.margin), {g, -g}};
  }
  const double g = -y * sigmoid(-y * gap);
  return {softplus(-y * gap), {g, -g}};
}

}  // namespace ssrpu
