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

#ifndef BNLAB_SURVIVOR_HPP_
#define BNLAB_SURVIVOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bnlab/grid.hpp"

namespace bnlab {

// One bit per action profile of the full grid.
class SurvivorSet {
 public:
  SurvivorSet() = default;
  explicit SurvivorSet(const ProfileSpace& space, bool fill = false);

  static SurvivorSet full(const ProfileSpace& space) { return SurvivorSet(space, true); }
  static SurvivorSet single(const ProfileSpace& space, ProfileIndex p);
  // Product of per-player action index sets.
  static SurvivorSet product(const ProfileSpace& space,
                             const std::vector<std::vector<std::size_t>>& sets);

  const ProfileSpace& space() const { return space_; }
  ProfileIndex universe() const { return space_.total(); }

  bool contains(ProfileIndex p) const {
    return (bits_[p >> 6] >> (p & 63)) & 1u;
  }
  void insert(ProfileIndex p) { bits_[p >> 6] |= std::uint64_t{1} << (p & 63); }
  void erase(ProfileIndex p) { bits_[p >> 6] &= ~(std::uint64_t{1} << (p & 63)); }

  std::uint64_t count() const;
  bool empty() const;

  // Sorted list of members.
  std::vector<ProfileIndex> members() const;
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t b = bits_[w];
      while (b != 0) {
        const int k = __builtin_ctzll(b);
        f(static_cast<ProfileIndex>(w * 64 + static_cast<std::size_t>(k)));
        b &= b - 1;
      }
    }
  }

  SurvivorSet& operator&=(const SurvivorSet& o);
  SurvivorSet& operator|=(const SurvivorSet& o);
  bool subset_of(const SurvivorSet& o) const;
  bool operator==(const SurvivorSet& o) const { return bits_ == o.bits_; }

  // Per-player sorted action indices that appear in some member.
  std::vector<std::vector<std::size_t>> projections() const;
  // Product of the projections.
  SurvivorSet product_hull() const;
  bool is_product() const { return product_hull() == *this; }

  const std::vector<std::uint64_t>& words() const { return bits_; }
  // Hex SHA-256 of the member list, used to cite a set by content.
  std::string digest() const;

 private:
  ProfileSpace space_;
  std::vector<std::uint64_t> bits_;
};

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

}  // namespace bnlab

#endif  // BNLAB_SURVIVOR_HPP_
