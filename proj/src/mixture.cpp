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

#include "bnlab/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bnlab/errors.hpp"

namespace bnlab {

ProfileMixture ProfileMixture::two_point(ProfileIndex p, ProfileIndex q,
                                         double w) {
  ProfileMixture m;
  if (p == q || w <= 0.0) return point(p);
  if (w >= 1.0) return point(q);
  m.support = {p, q};
  m.weights = {1.0 - w, w};
  return m;
}

void ProfileMixture::validate(const ProfileSpace& space) const {
  if (support.empty() || support.size() != weights.size()) {
    fail(ErrorCode::kInvalidArgument, "mixture support and weights mismatch");
  }
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      fail(ErrorCode::kInvalidArgument, "mixture weights must be nonnegative");
    }
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    fail(ErrorCode::kInvalidArgument, "mixture weights must sum to 1");
  }
  std::vector<ProfileIndex> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::kInvalidArgument, "mixture support must be distinct");
  }
  if (sorted.back() >= space.total()) {
    fail(ErrorCode::kInvalidArgument, "mixture support out of grid bounds");
  }
}

void ProfileMixture::canonicalize() {
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return support[a] < support[b];
  });
  std::vector<ProfileIndex> s;
  std::vector<double> w;
  for (std::size_t k : order) {
    if (weights[k] <= 0.0) continue;
    if (!s.empty() && s.back() == support[k]) {
      w.back() += weights[k];
    } else {
      s.push_back(support[k]);
      w.push_back(weights[k]);
    }
  }
  support = std::move(s);
  weights = std::move(w);
}

OpponentMixture OpponentMixture::from(const ProfileMixture& sigma,
                                      const ProfileSpace& space,
                                      std::size_t player) {
  OpponentMixture m;
  const std::size_t n = sigma.support.size();
  if (n == 1) {
    m.keys = {space.without(sigma.support[0], player)};
    m.weights = {sigma.weights[0]};
    return m;
  }
  std::vector<std::pair<ProfileIndex, double>> kv(n);
  for (std::size_t k = 0; k < n; ++k) {
    kv[k] = {space.without(sigma.support[k], player), sigma.weights[k]};
  }
  std::stable_sort(kv.begin(), kv.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  for (const auto& [key, w] : kv) {
    if (!m.keys.empty() && m.keys.back() == key) {
      m.weights.back() += w;
    } else {
      m.keys.push_back(key);
      m.weights.push_back(w);
    }
  }
  return m;
}

ParamBelief ParamBelief::point(std::size_t grid_size, std::size_t j) {
  ParamBelief b;
  b.weights.assign(grid_size, 0.0);
  b.weights.at(j) = 1.0;
  return b;
}

ParamBelief ParamBelief::mix(const ParamBelief& a, const ParamBelief& b,
                             double w) {
  if (a.weights.size() != b.weights.size()) {
    fail(ErrorCode::kInvalidArgument, "belief grids differ");
  }
  ParamBelief out;
  out.weights.resize(a.weights.size());
  for (std::size_t j = 0; j < a.weights.size(); ++j) {
    out.weights[j] = (1.0 - w) * a.weights[j] + w * b.weights[j];
  }
  return out;
}

void ParamBelief::validate() const {
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::kInvalidArgument, "belief weights must be nonnegative");
    s += w;
  }
  if (weights.empty() || std::abs(s - 1.0) > 1e-12) {
    fail(ErrorCode::kInvalidArgument, "belief weights must sum to 1");
  }
}

ParamBelief SparseBelief::dense(std::size_t grid_size) const {
  ParamBelief b;
  b.weights.assign(grid_size, 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) b.weights.at(index[k]) += weight[k];
  return b;
}

}  // namespace bnlab
