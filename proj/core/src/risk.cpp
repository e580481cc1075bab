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

#include "ssrpu/risk.hpp"

#include <string>

#include "ssrpu/errors.hpp"

namespace ssrpu {
namespace {

// Per-class risk
//   positive * mean_P l(f, +1)
//   + [unlabeled * mean_U l(f, -1) - positive_as_negative * mean_P l(f, -1)]
// with the bracket clamped at zero when `clamp` is set.
struct ClassCoefficients {
  double positive = 0.0;
  double unlabeled = 0.0;
  double positive_as_negative = 0.0;
  bool clamp = false;
};

void check_shapes(const Matrix& scores, std::size_t classes, const PriorShiftConfig& priors) {
  if (scores.rows() == 0) throw DomainError("risk of an empty batch is undefined");
  if (static_cast<std::size_t>(scores.cols()) != classes + 1)
    throw DomainError("score matrix has " + std::to_string(scores.cols()) +
                      " columns, expected K + 1 = " + std::to_string(classes + 1));
  if (priors.class_count() != classes)
    throw DomainError("prior config has " + std::to_string(priors.class_count()) +
                      " classes, expected " + std::to_string(classes));
}

RiskResult empty_result(const Matrix& scores, std::size_t classes) {
  RiskResult r;
  r.breakdown.positive_term.assign(classes, 0.0);
  r.breakdown.negative_term_raw.assign(classes, 0.0);
  r.breakdown.clamp_active.assign(classes, false);
  r.gradient = Matrix::Zero(scores.rows(), scores.cols());
  return r;
}

void accumulate_class(std::size_t cls, const Matrix& scores, const std::vector<Eigen::Index>& pos,
                      const std::vector<Eigen::Index>& unl, const ClassCoefficients& k,
                      const LossSpec& loss, RiskResult& out) {
  const auto col = static_cast<Eigen::Index>(cls) + 1;
  const double inv_p = pos.empty() ? 0.0 : 1.0 / static_cast<double>(pos.size());
  const double inv_u = unl.empty() ? 0.0 : 1.0 / static_cast<double>(unl.size());

  double sum_pos = 0.0;
  double sum_pos_as_neg = 0.0;
  double sum_unl = 0.0;
  for (const auto r : pos) {
    sum_pos += evaluate_loss(loss, scores(r, col), scores(r, 0), kPositive).value;
    sum_pos_as_neg += evaluate_loss(loss, scores(r, col), scores(r, 0), kNegative).value;
  }
  for (const auto r : unl) sum_unl += evaluate_loss(loss, scores(r, col), scores(r, 0), kNegative).value;

  const double positive_term = k.positive * inv_p * sum_pos;
  const double raw = k.unlabeled * inv_u * sum_unl - k.positive_as_negative * inv_p * sum_pos_as_neg;
  const bool clamped = k.clamp && raw < 0.0;

  out.breakdown.positive_term[cls] = positive_term;
  out.breakdown.negative_term_raw[cls] = raw;
  out.breakdown.clamp_active[cls] = clamped;
  out.breakdown.total += positive_term + (clamped ? 0.0 : raw);

  auto& g = out.gradient;
  for (const auto r : pos) {
    const LossGrad gp = evaluate_loss(loss, scores(r, col), scores(r, 0), kPositive).grad;
    double d_fi = k.positive * inv_p * gp.d_fi;
    double d_f0 = k.positive * inv_p * gp.d_f0;
    if (!clamped && k.positive_as_negative != 0.0) {
      const LossGrad gn = evaluate_loss(loss, scores(r, col), scores(r, 0), kNegative).grad;
      d_fi -= k.positive_as_negative * inv_p * gn.d_fi;
      d_f0 -= k.positive_as_negative * inv_p * gn.d_f0;
    }
    g(r, col) += d_fi;
    g(r, 0) += d_f0;
  }
  if (clamped) return;
  for (const auto r : unl) {
    const LossGrad gn = evaluate_loss(loss, scores(r, col), scores(r, 0), kNegative).grad;
    g(r, col) += k.unlabeled * inv_u * gn.d_fi;
    g(r, 0) += k.unlabeled * inv_u * gn.d_f0;
  }
}

double positive_weight(const RiskSpec& spec, double pi) {
  return spec.class_weighting ? pi * class_weight(pi) : pi;
}

RiskResult pu_family(const Matrix& scores, std::span<const ClassPartition> partitions,
                     const PriorShiftConfig& priors, const RiskSpec& spec, bool shifted) {
  spec.validate();
  check_shapes(scores, partitions.size(), priors);
  RiskResult out = empty_result(scores, partitions.size());
  for (std::size_t c = 0; c < partitions.size(); ++c) {
    const auto& part = partitions[c];
    if (part.unlabeled.empty())
      throw DomainError("class " + std::to_string(c) +
                        " has no unlabeled instances in the batch; cannot estimate its negative risk");
    const double pi = priors.pi[c];
    ClassCoefficients k;
    k.positive = positive_weight(spec, pi);
    k.clamp = true;
    if (shifted) {
      const double pi_u = priors.pi_u[c];
      if (!(pi_u >= 0.0 && pi_u < 1.0))
        throw DomainError("class " + std::to_string(c) + ": pi_u must lie in [0, 1), got " +
                          std::to_string(pi_u));
      k.unlabeled = (1.0 - pi) / (1.0 - pi_u);
      k.positive_as_negative = (pi_u - pi_u * pi) / (1.0 - pi_u);
    } else {
      k.unlabeled = 1.0;
      k.positive_as_negative = pi;
    }
    accumulate_class(c, scores, part.positives, part.unlabeled, k, spec.loss, out);
  }
  return out;
}

}  // namespace

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::pn: return "pn";
    case Estimator::nnpu: return "nnpu";
    case Estimator::nnspu: return "nnspu";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view text) {
  if (text == "pn") return Estimator::pn;
  if (text == "nnpu") return Estimator::nnpu;
  if (text == "nnspu") return Estimator::nnspu;
  throw ConfigError("unknown estimator '" + std::string(text) + "' (expected pn, nnpu or nnspu)");
}

std::size_t RiskBreakdown::clamp_count() const {
  std::size_t n = 0;
  for (const bool b : clamp_active) n += b ? 1 : 0;
  return n;
}

void to_json(nlohmann::json& j, const RiskBreakdown& b) {
  j = nlohmann::json{{"total", b.total},
                     {"positive_term", b.positive_term},
                     {"negative_term_raw", b.negative_term_raw},
                     {"clamp_active", b.clamp_active}};
}

RiskResult pn_risk(const Matrix& scores, const SignMatrix& labels, const PriorShiftConfig& priors,
                   const RiskSpec& spec) {
  spec.validate();
  const auto classes = static_cast<std::size_t>(labels.cols());
  check_shapes(scores, classes, priors);
  if (labels.rows() != scores.rows()) throw DomainError("labels and scores disagree on batch size");
  RiskResult out = empty_result(scores, classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const ClassPartition part = partition_class(labels, static_cast<int>(c));
    const double pi = priors.pi[c];
    ClassCoefficients k;
    k.positive = positive_weight(spec, pi);
    k.unlabeled = 1.0 - pi;
    accumulate_class(c, scores, part.positives, part.unlabeled, k, spec.loss, out);
  }
  return out;
}

RiskResult nnpu_risk(const Matrix& scores, std::span<const ClassPartition> partitions,
                     const PriorShiftConfig& priors, const RiskSpec& spec) {
  return pu_family(scores, partitions, priors, spec, false);
}

RiskResult nnspu_risk(const Matrix& scores, std::span<const ClassPartition> partitions,
                      const PriorShiftConfig& priors, const RiskSpec& spec) {
  return pu_family(scores, partitions, priors, spec, true);
}

RiskResult assemble_risk(const Matrix& scores, const SignMatrix& observed,
                         const PriorShiftConfig& priors, const RiskSpec& spec) {
  if (observed.rows() != scores.rows()) throw DomainError("observed labels and scores disagree on batch size");
  switch (spec.estimator) {
    case Estimator::pn: return pn_risk(scores, observed, priors, spec);
    case Estimator::nnpu: {
      const auto parts = partition_classes(observed);
      return nnpu_risk(scores, parts, priors, spec);
    }
    case Estimator::nnspu: {
      const auto parts = partition_classes(observed);
      return nnspu_risk(scores, parts, priors, spec);
    }
  }
  throw ConfigError("unknown estimator");
}

}  // namespace ssrpu
