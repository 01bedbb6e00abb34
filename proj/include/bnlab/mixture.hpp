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

#ifndef BNLAB_MIXTURE_HPP_
#define BNLAB_MIXTURE_HPP_

#include <cstddef>
#include <vector>

#include "bnlab/grid.hpp"

namespace bnlab {

// sigma: finite-support distribution over action profiles.
struct ProfileMixture {
  std::vector<ProfileIndex> support;
  std::vector<double> weights;

  static ProfileMixture point(ProfileIndex p) { return {{p}, {1.0}}; }
  static ProfileMixture two_point(ProfileIndex p, ProfileIndex q, double w);

  std::size_t size() const { return support.size(); }
  // Throws InvalidArgument unless weights are a probability vector over
  // distinct in-range profiles.
  void validate(const ProfileSpace& space) const;
  // Sorts support, merges duplicates and drops zero weights.
  void canonicalize();
  bool operator==(const ProfileMixture&) const = default;
};

// sigma^{-i}: pushforward onto opponents' sub-profiles, keyed by
// ProfileSpace::without(p, i). Keys are sorted and distinct.
struct OpponentMixture {
  std::vector<ProfileIndex> keys;
  std::vector<double> weights;

  static OpponentMixture from(const ProfileMixture& sigma,
                              const ProfileSpace& space, std::size_t player);
};

// mu^i: weights over one player's parameter grid.
struct ParamBelief {
  std::vector<double> weights;

  static ParamBelief point(std::size_t grid_size, std::size_t j);
  static ParamBelief mix(const ParamBelief& a, const ParamBelief& b, double w);
  void validate() const;
};

// Sparse belief used inside certificates.
struct SparseBelief {
  std::vector<std::size_t> index;
  std::vector<double> weight;

  ParamBelief dense(std::size_t grid_size) const;
  bool operator==(const SparseBelief&) const = default;
};

}  // namespace bnlab

#endif  // BNLAB_MIXTURE_HPP_
