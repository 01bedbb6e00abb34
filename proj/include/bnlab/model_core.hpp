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

#ifndef BNLAB_MODEL_CORE_HPP_
#define BNLAB_MODEL_CORE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/mixture.hpp"

namespace bnlab {

inline constexpr double kDefaultTol = 1e-9;

// 1/2 (m_model - m_true)^2, the KL divergence of two unit-variance normals.
double gaussian_kl(double model_mean, double true_mean);

// K^i(theta_j, p).
double kl_point(const Game& game, std::size_t player, std::size_t theta,
                ProfileIndex profile);

// Expected KL under sigma at every point of the player's parameter grid.
std::vector<double> expected_kl(const Game& game, const ProfileMixture& sigma,
                                std::size_t player);

// Grid parameters within tol of the minimal expected KL, ascending.
std::vector<std::size_t> kl_minimizer_set(const Game& game,
                                          const ProfileMixture& sigma,
                                          std::size_t player,
                                          double tol = kDefaultTol);

double expected_utility(const Game& game, std::size_t player,
                        std::size_t action, const ParamBelief& belief,
                        const OpponentMixture& opp);

// Expected utility of every own action.
std::vector<double> utility_vector(const Game& game, std::size_t player,
                                   const ParamBelief& belief,
                                   const OpponentMixture& opp);

// Actions within tol of the best expected utility, ascending.
std::vector<std::size_t> best_response_set(const Game& game,
                                           std::size_t player,
                                           const ParamBelief& belief,
                                           const OpponentMixture& opp,
                                           double tol = kDefaultTol);

struct JustifiedAction {
  std::size_t action;
  SparseBelief belief;
};

// Own actions that are tol-best responses to sigma^{-i} under some belief
// over the tol-minimizer set at sigma, each with one such belief.
std::vector<JustifiedAction> justified_actions(const Game& game,
                                               const ProfileMixture& sigma,
                                               std::size_t player,
                                               double tol = kDefaultTol);

struct PlayerCertificate {
  std::vector<std::size_t> minimizers;
  SparseBelief belief;
  // EU of the certified action minus the best EU; within [-tol, 0].
  double margin = 0.0;
  bool operator==(const PlayerCertificate&) const = default;
};

struct Certificate {
  bool ok = false;
  std::vector<PlayerCertificate> players;
  bool operator==(const Certificate&) const = default;
};

std::optional<PlayerCertificate> certify_player(const Game& game,
                                                std::size_t player,
                                                std::size_t action,
                                                const ProfileMixture& sigma,
                                                double tol = kDefaultTol);

// Checks that profile is justified by sigma for every player.
Certificate certify(const Game& game, ProfileIndex profile,
                    const ProfileMixture& sigma, double tol = kDefaultTol);

namespace detail {

// Utilities of all own actions under a sparse belief; out has one slot per
// own action.
void utilities(const Game& game, std::size_t player, const SparseBelief& mu,
               const OpponentMixture& opp, double* out);
void expected_kl(const Game& game, const ProfileMixture& sigma,
                 std::size_t player, double* out);

}  // namespace detail

}  // namespace bnlab

#endif  // BNLAB_MODEL_CORE_HPP_
