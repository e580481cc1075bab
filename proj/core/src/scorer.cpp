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

#include "ssrpu/scorer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "ssrpu/errors.hpp"

namespace ssrpu {

std::string_view to_string(Architecture arch) { return arch == Architecture::linear ? "linear" : "mlp1"; }

Architecture parse_architecture(std::string_view text) {
  if (text == "linear") return Architecture::linear;
  if (text == "mlp1") return Architecture::mlp1;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

Scorer::Scorer(Architecture arch, int input_dim, int class_count, int hidden_dim)
    : arch_(arch), input_dim_(input_dim), class_count_(class_count), hidden_dim_(hidden_dim) {
  if (input_dim <= 0 || class_count <= 0) throw DomainError("scorer dimensions must be positive");
  if (arch == Architecture::mlp1 && hidden_dim <= 0)
    throw DomainError("mlp1 scorer needs a positive hidden_dim");
  if (arch == Architecture::linear) hidden_dim_ = 0;
  const Eigen::Index out = output_dim();
  const Eigen::Index count = arch == Architecture::linear
                                 ? out * input_dim + out
                                 : Eigen::Index{hidden_dim} * input_dim + hidden_dim + out * hidden_dim + out;
  params_ = Vector::Zero(count);
}

Scorer Scorer::random(Architecture arch, int input_dim, int class_count, int hidden_dim,
                      std::uint64_t seed) {
  Scorer s(arch, input_dim, class_count, hidden_dim);
  std::mt19937_64 rng(seed);
  auto fill = [&](Eigen::Index offset, Eigen::Index count, int fan_in) {
    const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-a, a);
    for (Eigen::Index i = 0; i < count; ++i) s.params_[offset + i] = dist(rng);
  };
  const Eigen::Index out = s.output_dim();
  if (arch == Architecture::linear) {
    fill(0, out * input_dim, input_dim);
  } else {
    const Eigen::Index h = hidden_dim;
    fill(0, h * input_dim, input_dim);
    fill(h * input_dim + h, out * h, hidden_dim);
  }
  return s;
}

Scorer::MatrixMap Scorer::matrix_at(Eigen::Index offset, Eigen::Index rows, Eigen::Index cols) const {
  return MatrixMap(params_.data() + offset, rows, cols);
}

Scorer::VectorMap Scorer::vector_at(Eigen::Index offset, Eigen::Index size) const {
  return VectorMap(params_.data() + offset, size);
}

void Scorer::check_features(const Matrix& features) const {
  if (features.cols() != input_dim_)
    throw DomainError("feature dimension " + std::to_string(features.cols()) +
                      " does not match scorer input dimension " + std::to_string(input_dim_));
}

Matrix Scorer::forward(const Matrix& features) const {
  check_features(features);
  const Eigen::Index out = output_dim();
  const Eigen::Index d = input_dim_;
  if (arch_ == Architecture::linear) {
    const auto w = matrix_at(0, out, d);
    const auto b = vector_at(out * d, out);
    Matrix scores = features * w.transpose();
    scores.rowwise() += b.transpose();
    return scores;
  }
  const Eigen::Index h = hidden_dim_;
  const auto w1 = matrix_at(0, h, d);
  const auto b1 = vector_at(h * d, h);
  const auto w2 = matrix_at(h * d + h, out, h);
  const auto b2 = vector_at(h * d + h + out * h, out);
  Matrix hidden = features * w1.transpose();
  hidden.rowwise() += b1.transpose();
  hidden = hidden.array().tanh();
  Matrix scores = hidden * w2.transpose();
  scores.rowwise() += b2.transpose();
  return scores;
}

Vector Scorer::backward(const Matrix& features, const Matrix& score_gradient) const {
  check_features(features);
  const Eigen::Index out = output_dim();
  const Eigen::Index d = input_dim_;
  if (score_gradient.rows() != features.rows() || score_gradient.cols() != out)
    throw DomainError("score gradient shape does not match forward output");
  Vector grad(params_.size());
  if (arch_ == Architecture::linear) {
    Eigen::Map<Matrix>(grad.data(), out, d) = score_gradient.transpose() * features;
    grad.segment(out * d, out) = score_gradient.colwise().sum().transpose();
    return grad;
  }
  const Eigen::Index h = hidden_dim_;
  const auto w1 = matrix_at(0, h, d);
  const auto b1 = vector_at(h * d, h);
  const auto w2 = matrix_at(h * d + h, out, h);
  Matrix hidden = features * w1.transpose();
  hidden.rowwise() += b1.transpose();
  hidden = hidden.array().tanh();

  const Matrix d_hidden = score_gradient * w2;
  const Matrix d_pre = d_hidden.array() * (1.0 - hidden.array().square());
  Eigen::Map<Matrix>(grad.data(), h, d) = d_pre.transpose() * features;
  grad.segment(h * d, h) = d_pre.colwise().sum().transpose();
  Eigen::Map<Matrix>(grad.data() + h * d + h, out, h) = score_gradient.transpose() * hidden;
  grad.segment(h * d + h + out * h, out) = score_gradient.colwise().sum().transpose();
  return grad;
}

bool Scorer::operator==(const Scorer& other) const {
  return arch_ == other.arch_ && input_dim_ == other.input_dim_ &&
         class_count_ == other.class_count_ && hidden_dim_ == other.hidden_dim_ &&
         params_.size() == other.params_.size() && params_ == other.params_;
}

SignMatrix predict_from_scores(const Matrix& scores, LossForm form) {
  if (scores.cols() < 2) throw DomainError("scores need a none-class column and at least one class");
  const Eigen::Index k = scores.cols() - 1;
  SignMatrix out(scores.rows(), k);
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const double threshold = form == LossForm::ranking ? scores(r, 0) : 0.0;
    for (Eigen::Index c = 0; c < k; ++c)
      out(r, c) = scores(r, c + 1) > threshold ? kPositive : kNegative;
  }
  return out;
}

SignMatrix predict(const Scorer& scorer, const Matrix& features, LossForm form) {
  return predict_from_scores(scorer.forward(features), form);
}

void save_scorer(const Scorer& scorer, std::ostream& out) {
  out << "ssrpu-scorer " << kScorerFormatVersion << '\n'
      << "architecture " << to_string(scorer.architecture()) << '\n'
      << "input_dim " << scorer.input_dim() << '\n'
      << "class_count " << scorer.class_count() << '\n'
      << "hidden_dim " << scorer.hidden_dim() << '\n'
      << "parameters " << scorer.parameter_count() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const double v : scorer.parameters()) out << v << '\n';
  if (!out) throw Error("failed to write scorer");
}

void save_scorer(const Scorer& scorer, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_scorer(scorer, out);
}

namespace {

template <typename T>
T read_field(std::istream& in, std::size_t& line, std::string_view key) {
  std::string text;
  ++line;
  if (!std::getline(in, text)) throw ParseError(line, "unexpected end of scorer file, expected '" + std::string(key) + "'");
  std::istringstream fields(text);
  std::string name;
  T value{};
  if (!(fields >> name >> value) || name != key)
    throw ParseError(line, "expected '" + std::string(key) + " <value>', got '" + text + "'");
  return value;
}

}  // namespace

Scorer load_scorer(std::istream& in) {
  std::size_t line = 0;
  const int version = read_field<int>(in, line, "ssrpu-scorer");
  if (version != kScorerFormatVersion)
    throw SchemaError("unsupported scorer format version " + std::to_string(version));
  const auto arch = parse_architecture(read_field<std::string>(in, line, "architecture"));
  const int input_dim = read_field<int>(in, line, "input_dim");
  const int class_count = read_field<int>(in, line, "class_count");
  const int hidden_dim = read_field<int>(in, line, "hidden_dim");
  const auto count = read_field<Eigen::Index>(in, line, "parameters");
  Scorer scorer(arch, input_dim, class_count, hidden_dim);
  if (count != scorer.parameter_count())
    throw SchemaError("scorer header declares " + std::to_string(count) + " parameters, dimensions imply " +
                      std::to_string(scorer.parameter_count()));
  std::string text;
  for (Eigen::Index i = 0; i < count; ++i) {
    ++line;
    if (!std::getline(in, text)) throw ParseError(line, "unexpected end of parameter payload");
    std::size_t used = 0;
    try {
      scorer.parameters()[i] = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw ParseError(line, "invalid parameter value '" + text + "'");
  }
  return scorer;
}

Scorer load_scorer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_scorer(in);
}

}  // namespace ssrpu
