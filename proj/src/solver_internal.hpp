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

#ifndef BNLAB_SRC_SOLVER_INTERNAL_HPP_
#define BNLAB_SRC_SOLVER_INTERNAL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/solver.hpp"
#include "gaussian_fast.hpp"

namespace bnlab::detail {

// Justified-action sets J^i(sigma), via the windowed scans when every player
// is linear-Gaussian.
class Evaluator {
 public:
  Evaluator(const Game& game, double tol);
  const Game& game() const { return game_; }
  double tol() const { return tol_; }
  const GaussianFast* fast() const { return fast_.get(); }

  void justified(std::size_t i, const ProfileMixture& sigma,
                 std::vector<std::size_t>& out) const;
  void justified_point(std::size_t i, ProfileIndex p,
                       std::vector<std::size_t>& out) const;

 private:
  const Game& game_;
  double tol_;
  std::unique_ptr<GaussianFast> fast_;
};

// Accumulates Gamma survivors (profile mode) or W^i sets (player mode) and
// the first sigma that justified each of them.
class Collector {
 public:
  enum class Mode { kProfile, kPlayer };
  Collector(const Game& game, Mode mode, const ApplyOptions& opts);

  Mode mode() const { return mode_; }
  // justified[i] is J^i(sigma). sigma may be null for a point mass on p.
  void add(const ProfileMixture* sigma, ProfileIndex point,
           const std::vector<std::vector<std::size_t>>& justified);
  void mark_profile(ProfileIndex p, const ProfileMixture& sigma);
  void mark_action(std::size_t i, std::size_t x, const ProfileMixture& sigma);
  bool has_profile(ProfileIndex p) const { return profiles_.contains(p); }
  bool has_action(std::size_t i, std::size_t x) const { return actions_[i][x] != 0; }

  ApplyResult take_profiles();
  PlayerJustification take_actions();

 private:
  std::uint32_t sigma_index(const ProfileMixture* sigma, ProfileIndex point,
                            std::int64_t& cached);

  const Game& game_;
  Mode mode_;
  ApplyOptions opts_;
  SurvivorSet profiles_;
  std::vector<std::vector<char>> actions_;
  std::vector<std::pair<ProfileIndex, std::uint32_t>> profile_witness_;
  std::vector<std::vector<std::uint32_t>> action_witness_;
  std::vector<ProfileMixture> sigmas_;
  std::vector<std::size_t> pos_;
};

// Runs the policy's sigma search over Delta(a) into out.
void search(const Game& game, const SurvivorSet& a,
            const SigmaSearchPolicy& policy, double tol, Collector& out);

}  // namespace bnlab::detail

#endif  // BNLAB_SRC_SOLVER_INTERNAL_HPP_
