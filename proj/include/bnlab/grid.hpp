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

#ifndef BNLAB_GRID_HPP_
#define BNLAB_GRID_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bnlab {

using ProfileIndex = std::uint64_t;

// Strictly increasing list of real points. A uniform grid remembers how it
// was declared so that specs round-trip and nearest-point lookups are O(1).
class Grid {
 public:
  Grid() = default;

  static Grid uniform(double lo, double hi, std::size_t count);
  static Grid from_points(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t j) const { return points_[j]; }
  const std::vector<double>& points() const { return points_; }
  const double* data() const { return points_.data(); }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  bool is_uniform() const { return uniform_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Spacing of a uniform grid, 0 for a single point or explicit grid.
  double step() const { return step_; }

  // Index of the grid point closest to x (lower index on exact ties).
  std::size_t nearest(double x) const;
  // Largest j with points[j] <= x, clamped to [0, size-1].
  std::size_t floor_index(double x) const;

  bool operator==(const Grid& other) const;

 private:
  std::vector<double> points_;
  bool uniform_ = false;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double step_ = 0.0;
};

// Mixed-radix encoding of action profiles. The last player varies fastest,
// so index order is lexicographic order of the coordinate tuples.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<std::size_t> sizes);

  std::size_t num_players() const { return sizes_.size(); }
  std::size_t size(std::size_t player) const { return sizes_[player]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  ProfileIndex total() const { return total_; }
  ProfileIndex stride(std::size_t player) const { return strides_[player]; }

  std::size_t coord(ProfileIndex p, std::size_t player) const {
    return static_cast<std::size_t>((p / strides_[player]) % sizes_[player]);
  }
  ProfileIndex encode(const std::vector<std::size_t>& coords) const;
  std::vector<std::size_t> decode(ProfileIndex p) const;
  void decode(ProfileIndex p, std::size_t* out) const;

  // Key of the opponents' sub-profile: own coordinate set to zero.
  ProfileIndex without(ProfileIndex p, std::size_t player) const {
    return p - coord(p, player) * strides_[player];
  }
  ProfileIndex with(ProfileIndex opp_key, std::size_t player,
                    std::size_t action) const {
    return opp_key + action * strides_[player];
  }
  // Number of opponent sub-profiles of a player.
  ProfileIndex opponent_count(std::size_t player) const {
    return total_ / sizes_[player];
  }
  // Dense rank of an opponent key in [0, opponent_count).
  ProfileIndex opponent_rank(ProfileIndex opp_key, std::size_t player) const;
  ProfileIndex opponent_key(ProfileIndex rank, std::size_t player) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<ProfileIndex> strides_;
  ProfileIndex total_ = 0;
};

}  // namespace bnlab

#endif  // BNLAB_GRID_HPP_
