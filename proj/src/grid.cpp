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

#include "bnlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bnlab/errors.hpp"

namespace bnlab {

Grid Grid::uniform(double lo, double hi, std::size_t count) {
  if (count == 0) fail(ErrorCode::kSchema, "grid count must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorCode::kSchema, "grid bounds must be finite");
  }
  if (count > 1 && !(hi > lo)) {
    fail(ErrorCode::kSchema, "grid requires max > min when count > 1");
  }
  if (count == 1 && hi != lo) {
    fail(ErrorCode::kSchema, "single-point grid requires max == min");
  }
  Grid g;
  g.uniform_ = true;
  g.lo_ = lo;
  g.hi_ = hi;
  g.points_.resize(count);
  if (count == 1) {
    g.points_[0] = lo;
    return g;
  }
  const double n1 = static_cast<double>(count - 1);
  g.step_ = (hi - lo) / n1;
  for (std::size_t j = 0; j < count; ++j) {
    g.points_[j] = lo + (hi - lo) * static_cast<double>(j) / n1;
  }
  g.points_.back() = hi;
  return g;
}

Grid Grid::from_points(std::vector<double> points) {
  if (points.empty()) fail(ErrorCode::kSchema, "grid must be nonempty");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!std::isfinite(points[j])) {
      fail(ErrorCode::kSchema, "grid points must be finite");
    }
    if (j > 0 && !(points[j] > points[j - 1])) {
      fail(ErrorCode::kSchema, "grid points must be strictly increasing");
    }
  }
  Grid g;
  g.lo_ = points.front();
  g.hi_ = points.back();
  g.points_ = std::move(points);
  return g;
}

std::size_t Grid::floor_index(double x) const {
  if (x <= points_.front()) return 0;
  if (x >= points_.back()) return points_.size() - 1;
  if (uniform_) {
    auto j = static_cast<std::size_t>(std::floor((x - lo_) / step_));
    j = std::min(j, points_.size() - 1);
    while (j > 0 && points_[j] > x) --j;
    while (j + 1 < points_.size() && points_[j + 1] <= x) ++j;
    return j;
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

std::size_t Grid::nearest(double x) const {
  std::size_t j = floor_index(x);
  if (j + 1 < points_.size() &&
      std::abs(points_[j + 1] - x) < std::abs(x - points_[j])) {
    return j + 1;
  }
  return j;
}

bool Grid::operator==(const Grid& other) const {
  return uniform_ == other.uniform_ && lo_ == other.lo_ && hi_ == other.hi_ &&
         points_ == other.points_;
}

ProfileSpace::ProfileSpace(std::vector<std::size_t> sizes)
    : sizes_(std::move(sizes)) {
  if (sizes_.empty()) fail(ErrorCode::kSchema, "game needs at least one player");
  strides_.assign(sizes_.size(), 1);
  long double total = 1.0L;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (sizes_[i] == 0) fail(ErrorCode::kSchema, "empty action grid");
    strides_[i] = static_cast<ProfileIndex>(total);
    total *= static_cast<long double>(sizes_[i]);
  }
  if (total > static_cast<long double>(std::numeric_limits<ProfileIndex>::max() / 2)) {
    fail(ErrorCode::kSchema, "profile grid too large");
  }
  total_ = static_cast<ProfileIndex>(total);
}

ProfileIndex ProfileSpace::encode(const std::vector<std::size_t>& coords) const {
  if (coords.size() != sizes_.size()) {
    fail(ErrorCode::kInvalidArgument, "profile arity mismatch");
  }
  ProfileIndex p = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= sizes_[i]) {
      fail(ErrorCode::kInvalidArgument, "profile coordinate out of range");
    }
    p += coords[i] * strides_[i];
  }
  return p;
}

std::vector<std::size_t> ProfileSpace::decode(ProfileIndex p) const {
  std::vector<std::size_t> out(sizes_.size());
  decode(p, out.data());
  return out;
}

void ProfileSpace::decode(ProfileIndex p, std::size_t* out) const {
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    out[i] = static_cast<std::size_t>(p % sizes_[i]);
    p /= sizes_[i];
  }
}

ProfileIndex ProfileSpace::opponent_rank(ProfileIndex opp_key,
                                         std::size_t player) const {
  const ProfileIndex s = strides_[player];
  const ProfileIndex high = opp_key / (s * sizes_[player]);
  const ProfileIndex low = opp_key % s;
  return high * s + low;
}

ProfileIndex ProfileSpace::opponent_key(ProfileIndex rank,
                                        std::size_t player) const {
  const ProfileIndex s = strides_[player];
  const ProfileIndex high = rank / s;
  const ProfileIndex low = rank % s;
  return high * s * sizes_[player] + low;
}

}  // namespace bnlab
