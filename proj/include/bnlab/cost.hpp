// Copyright 2026 The bnlab Authors
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

#ifndef BNLAB_COST_HPP_
#define BNLAB_COST_HPP_

#include <vector>

namespace bnlab {

// Convex effort cost. Quadratic: c(a) = coef * a^2 / 2. Tabulated: c' is the
// piecewise-linear interpolant of (knots, marginal), extended linearly past
// the end knots, and c is its exact integral from knots[0].
class CostSpec {
 public:
  enum class Kind { kQuadratic, kTabulated };

  CostSpec() = default;
  static CostSpec quadratic(double coef);
  static CostSpec tabulated(std::vector<double> knots,
                            std::vector<double> marginal);

  Kind kind() const { return kind_; }
  double coef() const { return coef_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& marginal_values() const { return marginal_; }

  double value(double a) const;
  double marginal(double a) const;
  // (c')^{-1}(m); exact inverse of marginal().
  double inverse_marginal(double m) const;

  bool operator==(const CostSpec& other) const;

 private:
  std::size_t segment(double a) const;
  std::size_t segment_by_marginal(double m) const;

  Kind kind_ = Kind::kQuadratic;
  double coef_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> marginal_;
  std::vector<double> integral_;
};

}  // namespace bnlab

#endif  // BNLAB_COST_HPP_
