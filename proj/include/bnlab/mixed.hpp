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

#ifndef BNLAB_MIXED_HPP_
#define BNLAB_MIXED_HPP_

#include <cstddef>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/mixture.hpp"
#include "bnlab/model_core.hpp"

namespace bnlab {

struct LogitPerturbation {
  double lambda = 1.0;
  void validate() const;
};

// One distribution over own actions per player.
struct MixedProfile {
  std::vector<std::vector<double>> probs;

  static MixedProfile pure(const Game& game, ProfileIndex p);
  void validate(const Game& game) const;
  // Product measure over profiles, zero-weight profiles omitted.
  ProfileMixture product(const Game& game) const;
  bool operator==(const MixedProfile&) const = default;
};

using MixedProfileCloud = std::vector<MixedProfile>;

// kappa(x) proportional to exp(u(x) / lambda), computed relative to max u.
std::vector<double> logit_probabilities(const std::vector<double>& utilities,
                                        double lambda);

// The unique KL minimizer under the product measure of m. Throws
// UnidentifiedModel when more than one grid point lies within tol.
std::size_t unique_minimizer(const Game& game, const MixedProfile& m,
                             std::size_t player, double tol = kDefaultTol);

// Logit response of one player against m, with the degenerate best-fit
// belief.
std::vector<double> logit_response(const Game& game, const MixedProfile& m,
                                   std::size_t player,
                                   const LogitPerturbation& perturb,
                                   double tol = kDefaultTol);

MixedProfile phi_mixed_map(const Game& game, const MixedProfile& m,
                           const LogitPerturbation& perturb,
                           double tol = kDefaultTol);
MixedProfileCloud phi_mixed_step(const Game& game,
                                 const MixedProfileCloud& cloud,
                                 const LogitPerturbation& perturb,
                                 double tol = kDefaultTol);

// Product over players of the simplex mesh with points_per_dim points along
// each simplex edge.
MixedProfileCloud simplex_mesh_cloud(const Game& game, int points_per_dim = 11);

// Sup-norm distance between mixed profiles, and to the nearest cloud point.
double mixed_distance(const MixedProfile& a, const MixedProfile& b);
double distance_to_cloud(const MixedProfile& m, const MixedProfileCloud& cloud);
// Drops points within tol of an earlier point.
MixedProfileCloud dedupe(const MixedProfileCloud& cloud, double tol);

struct MixedIterateResult {
  MixedProfileCloud cloud;
  int rounds = 0;
  bool converged = false;
  double last_change = 0.0;
};

MixedIterateResult iterate_mixed(const Game& game, MixedProfileCloud cloud,
                                 const LogitPerturbation& perturb,
                                 int max_rounds = 200, double conv_tol = 1e-8,
                                 double tol = kDefaultTol);

// Iterates at each lambda in turn, starting every stage from the previous
// stage's cloud.
MixedIterateResult anneal(const Game& game, MixedProfileCloud cloud,
                          const std::vector<double>& lambdas,
                          int max_rounds = 200, double conv_tol = 1e-8,
                          double tol = kDefaultTol);

}  // namespace bnlab

#endif  // BNLAB_MIXED_HPP_
