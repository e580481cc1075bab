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

#include <string>
#include <string_view>

namespace ssrpu {

enum class LossFamily { squared, log_sigmoid };

/// Plain losses score f_i against 0; ranking losses score the gap f_i - f_0
/// against the none-class score f_0.
enum class LossForm { plain, ranking };

inline constexpr double kDefaultMargin = 0.25;

struct LossSpec {
  LossFamily family = LossFamily::squared;
  LossForm form = LossForm::ranking;
  double margin = kDefaultMargin;
  /// Lets a squared ranking loss run with margin 0. Only for demonstrating
  /// the resulting degeneracy; never set in normal use.
  bool allow_zero_margin = false;

  /// Throws ConfigError for a squared ranking loss with margin 0 (unless
  /// allowed) or a non-finite margin.
  void validate() const;

  std::string name() const;
};

std::string_view to_string(LossFamily family);
std::string_view to_string(LossForm form);
LossFamily parse_loss_family(std::string_view text);
LossForm parse_loss_form(std::string_view text);

/// Derivatives of a pointwise loss with respect to the class score f_i and
/// the none-class score f_0. For plain losses d_f0 is zero.
struct LossGrad {
  double d_fi = 0.0;
  double d_f0 = 0.0;
};

/// log(1 + exp(x)) without overflow.
double softplus(double x);
/// 1 / (1 + exp(-x)) without overflow.
double sigmoid(double x);

/// (y f - 1)^2 / 4
double squared_loss(double f, int y);
double squared_loss_grad(double f, int y);

/// (y (f_i - f_0) - margin)^2 / 4. Throws ConfigError if margin == 0.
double squared_ranking_loss(double f_i, double f_0, int y, double margin);
LossGrad squared_ranking_loss_grad(double f_i, double f_0, int y, double margin);

/// -log(sigmoid(y f))
double log_sigmoid_loss(double f, int y);
double log_sigmoid_loss_grad(double f, int y);

/// -log(sigmoid(y (f_i - f_0)))
double log_sigmoid_ranking_loss(double f_i, double f_0, int y);
LossGrad log_sigmoid_ranking_loss_grad(double f_i, double f_0, int y);

struct LossEval {
  double value = 0.0;
  LossGrad grad;
};

/// Loss and gradient for one (instance, class) cell under `spec`. The spec is
/// assumed validated; margin 0 is not rechecked here.
LossEval evaluate_loss(const LossSpec& spec, double f_i, double f_0, int y);

}  // namespace ssrpu
