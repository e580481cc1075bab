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
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssrpu/losses.hpp"
#include "ssrpu/priors.hpp"
#include "ssrpu/risk.hpp"
#include "ssrpu/scorer.hpp"

/// Independent verifiers: exact population risks on finite distributions,
/// conditional-risk grid scans, finite-difference gradient checks and the
/// self-check suite. The population risks are written straight from the risk
/// formulas and share only the pointwise losses with the training path.
namespace ssrpu::oracle {

/// Finite distribution over (x, y, s) with exact masses.
struct DiscreteDistribution {
  struct Point {
    Vector x;
    std::vector<int> gold;     // +1 / -1 per class
    std::vector<int> labeled;  // +1 labeled positive / -1 unlabeled per class
    double mass = 0.0;
  };

  int class_count = 0;
  std::vector<Point> points;

  /// Masses sum to 1 within 1e-12, labeled implies gold positive, shapes agree.
  void validate() const;

  std::vector<double> pi() const;          // p(y_i = +1)
  std::vector<double> pi_labeled() const;  // p(s_i = +1)
};

/// Random distribution where, within each class, every gold-positive x is
/// labeled with the same probability (labels missing completely at random).
/// Base points are expanded into their labeled/unlabeled copies; the result
/// has at most `max_points` points. Every class has positive and negative mass.
DiscreteDistribution random_distribution(std::mt19937_64& rng, int max_points, int class_count, int dim);

/// sum_i pi_i E_P[l(f_i, +1)] + (1 - pi_i) E_N[l(f_i, -1)] from gold labels.
double population_risk_ori(const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss);

/// Shifted-PU form of the same risk using labeled-positive and unlabeled
/// conditional expectations. When nothing is labeled for a class, E_P falls
/// back to the gold positives. `pi_u_offset` perturbs pi_u (mutation testing).
double population_risk_spu(const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss,
                           double pi_u_offset = 0.0);

/// Minimizer of the squared-ranking conditional risk: 2 delta margin - margin.
double bayes_gap(double delta, double margin);

/// Integer grid {j * step : lo <= j * step <= hi}; 0 is always a grid point
/// when lo <= 0 <= hi.
struct GapGrid {
  double lo = -1.5;
  double hi = 1.5;
  double step = 1e-3;

  static GapGrid covering(double margin, double step = 1e-3);
};

/// delta l(gap, +1) + (1 - delta) l(gap, -1) for the ranking form of `family`.
/// No margin guard: margin 0 is allowed here.
double conditional_ranking_risk(LossFamily family, double margin, double delta, double gap);

/// Grid argmin of the conditional ranking risk. Ties resolve to the smallest |gap|.
double grid_minimize_conditional_risk(LossFamily family, double margin, double delta, const GapGrid& grid);

/// Sample form of the shifted-PU risk without the non-negative clamp, using
/// population priors. Empty groups contribute zero.
double unclamped_spu_sample_risk(const Matrix& scores, const SignMatrix& labeled,
                                 const PriorShiftConfig& priors, const LossSpec& loss);

struct ConvergencePoint {
  int n = 0;
  double median_abs_error = 0.0;
};

/// For each sample size, the median over `seeds` of
/// |unclamped empirical S-PU risk - population S-PU risk| on i.i.d. draws.
std::vector<ConvergencePoint> empirical_vs_population_convergence(
    const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss,
    const std::vector<int>& sample_sizes, const std::vector<std::uint64_t>& seeds);

struct GradientCheck {
  double max_rel_error = 0.0;
  bool skipped = false;  // a clamp flipped inside the perturbation
};

/// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor = 1e-4);

/// Central differences of assemble_risk with respect to every score entry.
GradientCheck check_risk_gradient(const Matrix& scores, const SignMatrix& observed,
                                  const PriorShiftConfig& priors, const RiskSpec& spec, double h = 1e-5);

/// Tolerance for gradient checks of a loss family.
double gradient_tolerance(LossFamily family);

/// The four supported losses: {squared, log-sigmoid} x {plain, ranking}.
std::vector<LossSpec> all_losses(double margin = kDefaultMargin);

struct CheckVerdict {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

void to_json(nlohmann::json& j, const CheckVerdict& v);

struct CheckOptions {
  std::uint64_t seed = 62;
  /// Added to pi_u in the shifted-PU population risk; nonzero values must make
  /// the equivalence check fail.
  double corrupt_pi_u = 0.0;
};

/// Runs every self-check once, in a fixed order.
std::vector<CheckVerdict> run_checks(const CheckOptions& options = {});

}  // namespace ssrpu::oracle
