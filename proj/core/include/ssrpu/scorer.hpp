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
#include <iosfwd>
#include <string>
#include <string_view>

#include "ssrpu/losses.hpp"
#include "ssrpu/types.hpp"

namespace ssrpu {

enum class Architecture { linear, mlp1 };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view text);

/// Maps d features to K + 1 scores; output column 0 is the none-class score
/// f_0. `linear` is a single affine map, `mlp1` is affine -> tanh -> affine.
///
/// Parameters live in one flat vector so the optimizer can treat them
/// uniformly. Layout, each matrix row-major:
///   linear: W (K+1 x d), b (K+1)
///   mlp1:   W1 (h x d), b1 (h), W2 (K+1 x h), b2 (K+1)
class Scorer {
 public:
  Scorer() = default;
  Scorer(Architecture arch, int input_dim, int class_count, int hidden_dim = 0);

  /// Weights uniform in +-1/sqrt(fan_in), biases zero.
  static Scorer random(Architecture arch, int input_dim, int class_count, int hidden_dim,
                       std::uint64_t seed);

  Architecture architecture() const noexcept { return arch_; }
  int input_dim() const noexcept { return input_dim_; }
  int class_count() const noexcept { return class_count_; }
  int output_dim() const noexcept { return class_count_ + 1; }
  int hidden_dim() const noexcept { return hidden_dim_; }

  const Vector& parameters() const noexcept { return params_; }
  Vector& parameters() noexcept { return params_; }
  Eigen::Index parameter_count() const noexcept { return params_.size(); }

  /// n x (K + 1) scores. Throws DomainError on a feature-dimension mismatch.
  Matrix forward(const Matrix& features) const;

  /// Gradient of sum(score_gradient .* forward(features)) with respect to the
  /// flat parameter vector.
  Vector backward(const Matrix& features, const Matrix& score_gradient) const;

  bool operator==(const Scorer& other) const;

 private:
  using MatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<const Vector>;

  MatrixMap matrix_at(Eigen::Index offset, Eigen::Index rows, Eigen::Index cols) const;
  VectorMap vector_at(Eigen::Index offset, Eigen::Index size) const;
  void check_features(const Matrix& features) const;

  Architecture arch_ = Architecture::linear;
  int input_dim_ = 0;
  int class_count_ = 0;
  int hidden_dim_ = 0;
  Vector params_;
};

/// Signs from scores. Ranking: +1 iff f_i > f_0. Plain: +1 iff f_i > 0.
/// Ties predict -1.
SignMatrix predict_from_scores(const Matrix& scores, LossForm form);
SignMatrix predict(const Scorer& scorer, const Matrix& features, LossForm form);

/// Text parameter file:
///   ssrpu-scorer <version>
///   architecture <linear|mlp1>
///   input_dim <d>
///   class_count <K>
///   hidden_dim <h>
///   parameters <count>
///   <one value per line, 17 significant digits>
inline constexpr int kScorerFormatVersion = 1;

void save_scorer(const Scorer& scorer, std::ostream& out);
void save_scorer(const Scorer& scorer, const std::string& path);
Scorer load_scorer(std::istream& in);
Scorer load_scorer(const std::string& path);

}  // namespace ssrpu
