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

#include "bnlab/cost.hpp"

#include <algorithm>
#include <cmath>

#include "bnlab/errors.hpp"

namespace bnlab {

CostSpec CostSpec::quadratic(double coef) {
  if (!(coef > 0.0) || !std::isfinite(coef)) {
    fail(ErrorCode::kSchema, "quadratic cost coefficient must be positive");
  }
  CostSpec c;
  c.kind_ = Kind::kQuadratic;
  c.coef_ = coef;
  return c;
}

CostSpec CostSpec::tabulated(std::vector<double> knots,
                             std::vector<double> marginal) {
  if (knots.size() < 2 || knots.size() != marginal.size()) {
    fail(ErrorCode::kSchema,
         "tabulated cost needs >= 2 knots and one marginal value per knot");
  }
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!std::isfinite(knots[k]) || !std::isfinite(marginal[k])) {
      fail(ErrorCode::kSchema, "tabulated cost values must be finite");
    }
    if (k > 0 && !(knots[k] > knots[k - 1])) {
      fail(ErrorCode::kSchema, "cost knots must be strictly increasing");
    }
    if (k > 0 && !(marginal[k] > marginal[k - 1])) {
      fail(ErrorCode::kSchema, "marginal cost must be strictly increasing");
    }
  }
  CostSpec c;
  c.kind_ = Kind::kTabulated;
  c.knots_ = std::move(knots);
  c.marginal_ = std::move(marginal);
  c.integral_.assign(c.knots_.size(), 0.0);
  for (std::size_t k = 1; k < c.knots_.size(); ++k) {
    const double h = c.knots_[k] - c.knots_[k - 1];
    c.integral_[k] =
        c.integral_[k - 1] + 0.5 * h * (c.marginal_[k] + c.marginal_[k - 1]);
  }
  return c;
}

std::size_t CostSpec::segment(double a) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), a);
  std::size_t k = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(k, knots_.size() - 2);
}

std::size_t CostSpec::segment_by_marginal(double m) const {
  auto it = std::upper_bound(marginal_.begin(), marginal_.end(), m);
  std::size_t k = it == marginal_.begin() ? 0 : static_cast<std::size_t>(it - marginal_.begin()) - 1;
  return std::min(k, marginal_.size() - 2);
}

double CostSpec::marginal(double a) const {
  if (kind_ == Kind::kQuadratic) return coef_ * a;
  const std::size_t k = segment(a);
  const double slope =
      (marginal_[k + 1] - marginal_[k]) / (knots_[k + 1] - knots_[k]);
  return marginal_[k] + slope * (a - knots_[k]);
}

double CostSpec::value(double a) const {
  if (kind_ == Kind::kQuadratic) return 0.5 * coef_ * a * a;
  const std::size_t k = segment(a);
  const double slope =
      (marginal_[k + 1] - marginal_[k]) / (knots_[k + 1] - knots_[k]);
  const double d = a - knots_[k];
  return integral_[k] + marginal_[k] * d + 0.5 * slope * d * d;
}

double CostSpec::inverse_marginal(double m) const {
  if (kind_ == Kind::kQuadratic) return m / coef_;
  const std::size_t k = segment_by_marginal(m);
  const double slope =
      (marginal_[k + 1] - marginal_[k]) / (knots_[k + 1] - knots_[k]);
  return knots_[k] + (m - marginal_[k]) / slope;
}

bool CostSpec::operator==(const CostSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::kQuadratic) return coef_ == other.coef_;
  return knots_ == other.knots_ && marginal_ == other.marginal_;
}

}  // namespace bnlab
