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

#include "ssrpu/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssrpu/errors.hpp"

namespace ssrpu::oracle {
namespace {

struct ClassScores {
  double f_i;
  double f_0;
};

// Scores of every point, computed once per risk evaluation.
Matrix point_scores(const DiscreteDistribution& dist, const Scorer& scorer) {
  if (dist.points.empty()) throw DomainError("distribution has no points");
  Matrix x(static_cast<Eigen::Index>(dist.points.size()), dist.points.front().x.size());
  for (std::size_t p = 0; p < dist.points.size(); ++p) x.row(static_cast<Eigen::Index>(p)) = dist.points[p].x.transpose();
  return scorer.forward(x);
}

double loss_at(const LossSpec& loss, const Matrix& scores, std::size_t point, int cls, int y) {
  const auto r = static_cast<Eigen::Index>(point);
  return evaluate_loss(loss, scores(r, cls + 1), scores(r, 0), y).value;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

void DiscreteDistribution::validate() const {
  if (class_count <= 0) throw DomainError("distribution needs at least one class");
  double total = 0.0;
  for (const auto& p : points) {
    if (static_cast<int>(p.gold.size()) != class_count || static_cast<int>(p.labeled.size()) != class_count)
      throw DomainError("point label vectors must have one entry per class");
    if (!(p.mass >= 0.0)) throw DomainError("point masses must be non-negative");
    for (int c = 0; c < class_count; ++c)
      if (p.labeled[static_cast<std::size_t>(c)] == kPositive && p.gold[static_cast<std::size_t>(c)] != kPositive)
        throw DomainError("a labeled point must be a gold positive");
    total += p.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("point masses must sum to 1");
}

std::vector<double> DiscreteDistribution::pi() const {
  std::vector<double> out(static_cast<std::size_t>(class_count), 0.0);
  for (const auto& p : points)
    for (std::size_t c = 0; c < out.size(); ++c)
      if (p.gold[c] == kPositive) out[c] += p.mass;
  return out;
}

std::vector<double> DiscreteDistribution::pi_labeled() const {
  std::vector<double> out(static_cast<std::size_t>(class_count), 0.0);
  for (const auto& p : points)
    for (std::size_t c = 0; c < out.size(); ++c)
      if (p.labeled[c] == kPositive) out[c] += p.mass;
  return out;
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, int max_points, int class_count, int dim) {
  if (max_points < 2 || class_count <= 0 || dim <= 0) throw DomainError("invalid random distribution request");
  for (;;) {
    const int base = uniform_int(rng, 2, std::max(2, std::min(max_points, 8)));
    std::vector<double> keep(static_cast<std::size_t>(class_count));
    for (auto& rho : keep) {
      const double u = uniform(rng, 0.0, 1.0);
      rho = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : uniform(rng, 0.05, 0.95));
    }
    std::vector<std::vector<int>> gold(static_cast<std::size_t>(base), std::vector<int>(static_cast<std::size_t>(class_count)));
    for (auto& g : gold)
      for (auto& y : g) y = uniform(rng, 0.0, 1.0) < 0.4 ? kPositive : kNegative;
    // Every class needs both a positive and a negative base point.
    for (int c = 0; c < class_count; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      const int a = uniform_int(rng, 0, base - 1);
      const int b = (a + uniform_int(rng, 1, base - 1)) % base;
      gold[static_cast<std::size_t>(a)][cc] = kPositive;
      gold[static_cast<std::size_t>(b)][cc] = kNegative;
    }

    DiscreteDistribution dist;
    dist.class_count = class_count;
    std::vector<double> base_mass(static_cast<std::size_t>(base));
    double total = 0.0;
    for (auto& m : base_mass) total += (m = uniform(rng, 0.05, 1.0));
    for (int b = 0; b < base; ++b) {
      Vector x(dim);
      for (int j = 0; j < dim; ++j) x[j] = std::normal_distribution<double>(0.0, 1.0)(rng);
      const auto& g = gold[static_cast<std::size_t>(b)];
      std::vector<int> pos;
      for (int c = 0; c < class_count; ++c)
        if (g[static_cast<std::size_t>(c)] == kPositive) pos.push_back(c);
      // One copy per labeling pattern of this point's positive classes.
      for (unsigned pattern = 0; pattern < (1u << pos.size()); ++pattern) {
        DiscreteDistribution::Point p;
        p.x = x;
        p.gold = g;
        p.labeled.assign(static_cast<std::size_t>(class_count), kNegative);
        p.mass = base_mass[static_cast<std::size_t>(b)] / total;
        for (std::size_t j = 0; j < pos.size(); ++j) {
          const auto c = static_cast<std::size_t>(pos[j]);
          const bool labeled = (pattern >> j) & 1u;
          p.labeled[c] = labeled ? kPositive : kNegative;
          p.mass *= labeled ? keep[c] : 1.0 - keep[c];
        }
        if (p.mass > 0.0) dist.points.push_back(std::move(p));
      }
    }
    if (static_cast<int>(dist.points.size()) > max_points) continue;
    // Renormalize away rounding in the products.
    double sum = 0.0;
    for (const auto& p : dist.points) sum += p.mass;
    for (auto& p : dist.points) p.mass /= sum;
    dist.validate();
    return dist;
  }
}

double population_risk_ori(const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss) {
  dist.validate();
  const Matrix scores = point_scores(dist, scorer);
  const auto pi = dist.pi();
  double risk = 0.0;
  for (int c = 0; c < dist.class_count; ++c) {
    const double p = pi[static_cast<std::size_t>(c)];
    if (!(p > 0.0)) throw DomainError("class " + std::to_string(c) + " has zero positive mass");
    if (!(p < 1.0)) throw DomainError("class " + std::to_string(c) + " has zero negative mass");
    double e_pos = 0.0;
    double e_neg = 0.0;
    for (std::size_t i = 0; i < dist.points.size(); ++i) {
      const auto& pt = dist.points[i];
      if (pt.gold[static_cast<std::size_t>(c)] == kPositive)
        e_pos += pt.mass * loss_at(loss, scores, i, c, kPositive);
      else
        e_neg += pt.mass * loss_at(loss, scores, i, c, kNegative);
    }
    e_pos /= p;
    e_neg /= 1.0 - p;
    risk += p * e_pos + (1.0 - p) * e_neg;
  }
  return risk;
}

double population_risk_spu(const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss,
                           double pi_u_offset) {
  dist.validate();
  const Matrix scores = point_scores(dist, scorer);
  const auto pi = dist.pi();
  const auto pi_l = dist.pi_labeled();
  double risk = 0.0;
  for (int c = 0; c < dist.class_count; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const double p = pi[cc];
    const double pl = pi_l[cc];
    if (!(p > 0.0)) throw DomainError("class " + std::to_string(c) + " has zero positive mass");
    const double pu = derive_unlabeled_prior(p, pl, c) + pi_u_offset;
    if (!(pu < 1.0)) throw DomainError("class " + std::to_string(c) + ": pi_u must be < 1");

    const bool use_labeled = pl > 0.0;
    double e_p_pos = 0.0;
    double e_p_neg = 0.0;
    double e_u_neg = 0.0;
    for (std::size_t i = 0; i < dist.points.size(); ++i) {
      const auto& pt = dist.points[i];
      const bool in_p = use_labeled ? pt.labeled[cc] == kPositive : pt.gold[cc] == kPositive;
      if (in_p) {
        e_p_pos += pt.mass * loss_at(loss, scores, i, c, kPositive);
        e_p_neg += pt.mass * loss_at(loss, scores, i, c, kNegative);
      }
      if (pt.labeled[cc] != kPositive) e_u_neg += pt.mass * loss_at(loss, scores, i, c, kNegative);
    }
    const double p_mass = use_labeled ? pl : p;
    e_p_pos /= p_mass;
    e_p_neg /= p_mass;
    e_u_neg /= 1.0 - pl;
    risk += p * e_p_pos + (1.0 - p) / (1.0 - pu) * e_u_neg - (pu - pu * p) / (1.0 - pu) * e_p_neg;
  }
  return risk;
}

double bayes_gap(double delta, double margin) {
  if (margin == 0.0) throw DomainError("Bayes gap is undefined for margin 0");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  return 2.0 * delta * margin - margin;
}

GapGrid GapGrid::covering(double margin, double step) {
  const double half = 2.0 * std::abs(margin) + 1.0;
  return {-half, half, step};
}

double conditional_ranking_risk(LossFamily family, double margin, double delta, double gap) {
  if (family == LossFamily::squared) {
    const double up = gap - margin;
    const double down = -gap - margin;
    return delta * 0.25 * up * up + (1.0 - delta) * 0.25 * down * down;
  }
  return delta * softplus(-gap) + (1.0 - delta) * softplus(gap);
}

double grid_minimize_conditional_risk(LossFamily family, double margin, double delta, const GapGrid& grid) {
  if (!(grid.step > 0.0) || grid.hi < grid.lo) throw DomainError("invalid gap grid");
  const auto first = static_cast<long long>(std::ceil(grid.lo / grid.step));
  const auto last = static_cast<long long>(std::floor(grid.hi / grid.step));
  double best_gap = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (long long j = first; j <= last; ++j) {
    const double gap = static_cast<double>(j) * grid.step;
    const double r = conditional_ranking_risk(family, margin, delta, gap);
    if (r < best || (r == best && std::abs(gap) < std::abs(best_gap))) {
      best = r;
      best_gap = gap;
    }
  }
  return best_gap;
}

double unclamped_spu_sample_risk(const Matrix& scores, const SignMatrix& labeled,
                                 const PriorShiftConfig& priors, const LossSpec& loss) {
  double risk = 0.0;
  for (Eigen::Index c = 0; c < labeled.cols(); ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const double p = priors.pi[cc];
    const double pu = priors.pi_u[cc];
    double sum_pos = 0.0, sum_pos_neg = 0.0, sum_unl = 0.0;
    std::size_t n_p = 0, n_u = 0;
    for (Eigen::Index r = 0; r < labeled.rows(); ++r) {
      const double fi = scores(r, c + 1);
      const double f0 = scores(r, 0);
      if (labeled(r, c) == kPositive) {
        ++n_p;
        sum_pos += evaluate_loss(loss, fi, f0, kPositive).value;
        sum_pos_neg += evaluate_loss(loss, fi, f0, kNegative).value;
      } else {
        ++n_u;
        sum_unl += evaluate_loss(loss, fi, f0, kNegative).value;
      }
    }
    if (n_p > 0) {
      risk += p * sum_pos / static_cast<double>(n_p);
      risk -= (pu - pu * p) / (1.0 - pu) * sum_pos_neg / static_cast<double>(n_p);
    }
    if (n_u > 0) risk += (1.0 - p) / (1.0 - pu) * sum_unl / static_cast<double>(n_u);
  }
  return risk;
}

std::vector<ConvergencePoint> empirical_vs_population_convergence(
    const DiscreteDistribution& dist, const Scorer& scorer, const LossSpec& loss,
    const std::vector<int>& sample_sizes, const std::vector<std::uint64_t>& seeds) {
  dist.validate();
  if (seeds.empty()) throw DomainError("need at least one seed");
  const double population = population_risk_spu(dist, scorer, loss);
  const Matrix point_score = point_scores(dist, scorer);
  const PriorShiftConfig priors = make_prior_config(dist.pi(), dist.pi_labeled());
  std::vector<double> masses;
  for (const auto& p : dist.points) masses.push_back(p.mass);

  std::vector<ConvergencePoint> out;
  for (const int n : sample_sizes) {
    std::vector<double> errors;
    for (const auto seed : seeds) {
      std::mt19937_64 rng(seed);
      std::discrete_distribution<std::size_t> draw(masses.begin(), masses.end());
      Matrix scores(n, point_score.cols());
      SignMatrix labeled(n, dist.class_count);
      for (int r = 0; r < n; ++r) {
        const auto p = draw(rng);
        scores.row(r) = point_score.row(static_cast<Eigen::Index>(p));
        for (int c = 0; c < dist.class_count; ++c) labeled(r, c) = dist.points[p].labeled[static_cast<std::size_t>(c)];
      }
      errors.push_back(std::abs(unclamped_spu_sample_risk(scores, labeled, priors, loss) - population));
    }
    std::sort(errors.begin(), errors.end());
    const std::size_t m = errors.size();
    const double median = m % 2 ? errors[m / 2] : 0.5 * (errors[m / 2 - 1] + errors[m / 2]);
    out.push_back({n, median});
  }
  return out;
}

double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

GradientCheck check_risk_gradient(const Matrix& scores, const SignMatrix& observed,
                                  const PriorShiftConfig& priors, const RiskSpec& spec, double h) {
  const RiskResult base = assemble_risk(scores, observed, priors, spec);
  GradientCheck out;
  Matrix probe = scores;
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      probe(r, c) = scores(r, c) + h;
      const RiskResult up = assemble_risk(probe, observed, priors, spec);
      probe(r, c) = scores(r, c) - h;
      const RiskResult down = assemble_risk(probe, observed, priors, spec);
      probe(r, c) = scores(r, c);
      if (up.breakdown.clamp_active != base.breakdown.clamp_active ||
          down.breakdown.clamp_active != base.breakdown.clamp_active) {
        out.skipped = true;
        out.max_rel_error = 0.0;
        return out;
      }
      const double numeric = (up.breakdown.total - down.breakdown.total) / (2.0 * h);
      out.max_rel_error = std::max(out.max_rel_error, relative_error(base.gradient(r, c), numeric));
    }
  }
  return out;
}

double gradient_tolerance(LossFamily family) { return family == LossFamily::squared ? 1e-5 : 1e-4; }

std::vector<LossSpec> all_losses(double margin) {
  std::vector<LossSpec> out;
  for (const auto family : {LossFamily::squared, LossFamily::log_sigmoid})
    for (const auto form : {LossForm::plain, LossForm::ranking}) {
      LossSpec spec;
      spec.family = family;
      spec.form = form;
      spec.margin = margin;
      out.push_back(spec);
    }
  return out;
}

void to_json(nlohmann::json& j, const CheckVerdict& v) {
  j = nlohmann::json{{"name", v.name},
                     {"passed", v.passed},
                     {"measured", v.measured},
                     {"threshold", v.threshold},
                     {"detail", v.detail}};
}

namespace {

Scorer random_linear_scorer(std::mt19937_64& rng, int dim, int classes) {
  Scorer s = Scorer::random(Architecture::linear, dim, classes, 0, rng());
  // Spread scores beyond the default init range so losses see varied inputs.
  s.parameters() *= uniform(rng, 0.5, 3.0);
  for (Eigen::Index i = s.parameter_count() - s.output_dim(); i < s.parameter_count(); ++i)
    s.parameters()[i] = uniform(rng, -0.5, 0.5);
  return s;
}

struct RandomBatch {
  Matrix scores;
  SignMatrix observed;
  PriorShiftConfig priors;
};

RandomBatch random_batch(std::mt19937_64& rng) {
  RandomBatch b;
  const int n = uniform_int(rng, 2, 6);
  const int k = uniform_int(rng, 1, 3);
  b.scores.resize(n, k + 1);
  for (Eigen::Index i = 0; i < b.scores.size(); ++i) b.scores.data()[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
  b.observed = SignMatrix::Constant(n, k, kNegative);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < k; ++c)
      if (uniform(rng, 0.0, 1.0) < 0.4) b.observed(r, c) = kPositive;
  for (int c = 0; c < k; ++c) b.observed(uniform_int(rng, 0, n - 1), c) = kNegative;
  std::vector<double> pi, pl;
  for (int c = 0; c < k; ++c) {
    pi.push_back(uniform(rng, 0.05, 0.6));
    pl.push_back(uniform(rng, 0.0, pi.back()));
  }
  b.priors = make_prior_config(pi, pl);
  return b;
}

PriorShiftConfig with_pi_u(PriorShiftConfig p, bool equal_to_pi) {
  for (std::size_t c = 0; c < p.pi.size(); ++c) {
    p.pi_labeled[c] = equal_to_pi ? 0.0 : p.pi[c];
    p.pi_u[c] = equal_to_pi ? p.pi[c] : 0.0;
  }
  return p;
}

double max_abs_diff(const RiskResult& a, const RiskResult& b) {
  double d = std::abs(a.breakdown.total - b.breakdown.total);
  if (a.gradient.size() > 0) d = std::max(d, (a.gradient - b.gradient).cwiseAbs().maxCoeff());
  return d;
}

CheckVerdict risk_equivalence_check(const CheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  const double margins[] = {0.1, 0.25, 0.5, 1.0};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = uniform_int(rng, 1, 4);
    const int d = uniform_int(rng, 1, 4);
    const auto dist = random_distribution(rng, 20, k, d);
    const Scorer scorer = random_linear_scorer(rng, d, k);
    for (const auto& loss : all_losses(margins[uniform_int(rng, 0, 3)])) {
      const double ori = population_risk_ori(dist, scorer, loss);
      const double spu = population_risk_spu(dist, scorer, loss, options.corrupt_pi_u);
      worst = std::max(worst, std::abs(ori - spu));
    }
  }
  return {"risk_equivalence", worst < 1e-10, worst, 1e-10,
          "50 random distributions (<=20 points, K<=4) x 4 losses"};
}

CheckVerdict bayes_gap_check() {
  double worst = 0.0;
  int sign_failures = 0;
  for (const double margin : {0.1, 0.25, 0.5, 1.0}) {
    const auto grid = GapGrid::covering(margin);
    for (int i = 0; i <= 10; ++i) {
      const double delta = i / 10.0;
      const double gap = grid_minimize_conditional_risk(LossFamily::squared, margin, delta, grid);
      worst = std::max(worst, std::abs(gap - bayes_gap(delta, margin)));
      if ((delta > 0.5 && !(gap > 0.0)) || (delta < 0.5 && !(gap < 0.0))) ++sign_failures;
    }
  }
  std::ostringstream os;
  os << "grid step 1e-3, sign failures " << sign_failures;
  return {"bayes_gap_closed_form", worst <= 1e-3 + 1e-12 && sign_failures == 0, worst, 1e-3, os.str()};
}

CheckVerdict margin_zero_check() {
  const GapGrid grid = GapGrid::covering(0.0);
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i)
    worst = std::max(worst, std::abs(grid_minimize_conditional_risk(LossFamily::squared, 0.0, i / 10.0, grid)));
  return {"margin_zero_degeneracy", worst == 0.0, worst, 0.0,
          "squared ranking with margin 0: Bayes gap is 0 for every delta"};
}

CheckVerdict log_sigmoid_sign_check() {
  const GapGrid grid = GapGrid::covering(kDefaultMargin);
  int failures = 0;
  for (int i = 0; i <= 10; ++i) {
    const double delta = i / 10.0;
    const double gap = grid_minimize_conditional_risk(LossFamily::log_sigmoid, 0.0, delta, grid);
    if ((delta > 0.5 && !(gap > 0.0)) || (delta < 0.5 && !(gap < 0.0))) ++failures;
  }
  return {"log_sigmoid_ranking_sign", failures == 0, static_cast<double>(failures), 0.0,
          "sign(argmin gap) == sign(delta - 1/2)"};
}

std::vector<CheckVerdict> loss_gradient_checks(std::mt19937_64& rng) {
  const double h = 1e-5;
  double worst_sq = 0.0;
  double worst_ls = 0.0;
  const auto losses = all_losses();
  for (int s = 0; s < 1000; ++s) {
    const double fi = uniform(rng, -3.0, 3.0);
    const double f0 = uniform(rng, -3.0, 3.0);
    const int y = uniform(rng, 0.0, 1.0) < 0.5 ? kPositive : kNegative;
    LossSpec loss = losses[static_cast<std::size_t>(s % 4)];
    loss.margin = uniform(rng, 0.05, 1.5);
    const LossEval at = evaluate_loss(loss, fi, f0, y);
    const double num_fi = (evaluate_loss(loss, fi + h, f0, y).value - evaluate_loss(loss, fi - h, f0, y).value) / (2 * h);
    const double num_f0 = (evaluate_loss(loss, fi, f0 + h, y).value - evaluate_loss(loss, fi, f0 - h, y).value) / (2 * h);
    const double err = std::max(relative_error(at.grad.d_fi, num_fi), relative_error(at.grad.d_f0, num_f0));
    (loss.family == LossFamily::squared ? worst_sq : worst_ls) = std::max(
        loss.family == LossFamily::squared ? worst_sq : worst_ls, err);
  }
  return {{"loss_gradients_squared", worst_sq < 1e-5, worst_sq, 1e-5, "1000 samples over 4 losses"},
          {"loss_gradients_log_sigmoid", worst_ls < 1e-4, worst_ls, 1e-4, "1000 samples over 4 losses"}};
}

CheckVerdict risk_gradient_check(std::mt19937_64& rng) {
  double worst_ratio = 0.0;
  int checked = 0;
  int skipped = 0;
  for (int b = 0; b < 200; ++b) {
    const RandomBatch batch = random_batch(rng);
    for (const auto est : {Estimator::pn, Estimator::nnpu, Estimator::nnspu})
      for (const auto& loss : all_losses(uniform(rng, 0.1, 1.0))) {
        RiskSpec spec{est, uniform(rng, 0.0, 1.0) < 0.5, loss};
        const auto g = check_risk_gradient(batch.scores, batch.observed, batch.priors, spec);
        if (g.skipped) {
          ++skipped;
          continue;
        }
        ++checked;
        worst_ratio = std::max(worst_ratio, g.max_rel_error / gradient_tolerance(loss.family));
      }
  }
  std::ostringstream os;
  os << checked << " (batch, estimator, loss) cases checked, " << skipped
     << " excluded at a clamp boundary; measured = max(rel error / tolerance)";
  return {"risk_gradients", worst_ratio < 1.0, worst_ratio, 1.0, os.str()};
}

std::vector<CheckVerdict> reduction_checks(std::mt19937_64& rng) {
  double worst_pn = 0.0;
  double worst_pu = 0.0;
  for (int b = 0; b < 100; ++b) {
    const RandomBatch batch = random_batch(rng);
    for (const auto& loss : all_losses(uniform(rng, 0.1, 1.0))) {
      const bool weighted = uniform(rng, 0.0, 1.0) < 0.5;
      const RiskSpec pn{Estimator::pn, weighted, loss};
      const RiskSpec nnpu{Estimator::nnpu, weighted, loss};
      const RiskSpec nnspu{Estimator::nnspu, weighted, loss};
      const auto shifted_zero = assemble_risk(batch.scores, batch.observed, with_pi_u(batch.priors, false), nnspu);
      worst_pn = std::max(worst_pn, max_abs_diff(shifted_zero, assemble_risk(batch.scores, batch.observed, batch.priors, pn)));
      const auto shifted_full = assemble_risk(batch.scores, batch.observed, with_pi_u(batch.priors, true), nnspu);
      worst_pu = std::max(worst_pu, max_abs_diff(shifted_full, assemble_risk(batch.scores, batch.observed, batch.priors, nnpu)));
    }
  }
  return {{"reduction_pi_u_zero_is_pn", worst_pn < 1e-12, worst_pn, 1e-12, "100 random batches x 4 losses"},
          {"reduction_pi_u_pi_is_nnpu", worst_pu < 1e-12, worst_pu, 1e-12, "100 random batches x 4 losses"}};
}

CheckVerdict convergence_check(std::mt19937_64& rng) {
  const auto dist = random_distribution(rng, 20, 3, 3);
  const Scorer scorer = random_linear_scorer(rng, 3, 3);
  LossSpec loss;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(1000 + s);
  const auto curve = empirical_vs_population_convergence(dist, scorer, loss, {1000, 100000}, seeds);
  std::ostringstream os;
  os << "median |error| n=1000: " << curve[0].median_abs_error << ", n=100000: " << curve[1].median_abs_error;
  return {"spu_sampling_convergence", curve[1].median_abs_error < curve[0].median_abs_error,
          curve[1].median_abs_error, curve[0].median_abs_error, os.str()};
}

}  // namespace

std::vector<CheckVerdict> run_checks(const CheckOptions& options) {
  std::vector<CheckVerdict> out;
  out.push_back(risk_equivalence_check(options));
  out.push_back(bayes_gap_check());
  out.push_back(margin_zero_check());
  out.push_back(log_sigmoid_sign_check());
  std::mt19937_64 rng(options.seed + 1);
  for (auto& v : loss_gradient_checks(rng)) out.push_back(std::move(v));
  out.push_back(risk_gradient_check(rng));
  for (auto& v : reduction_checks(rng)) out.push_back(std::move(v));
  out.push_back(convergence_check(rng));
  return out;
}

}  // namespace ssrpu::oracle
