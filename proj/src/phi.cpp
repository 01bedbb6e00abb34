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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bnlab/errors.hpp"
#include "bnlab/mixed.hpp"
#include "bnlab/parallel.hpp"

namespace bnlab {

namespace {

constexpr double kMaxCloud = 1e6;

}  // namespace

void LogitPerturbation::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::kInvalidArgument, "logit lambda must be positive");
  }
}

MixedProfile MixedProfile::pure(const Game& game, ProfileIndex p) {
  MixedProfile m;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    std::vector<double> v(game.actions(i).size(), 0.0);
    v[game.space().coord(p, i)] = 1.0;
    m.probs.push_back(std::move(v));
  }
  return m;
}

void MixedProfile::validate(const Game& game) const {
  if (probs.size() != game.num_players()) {
    fail(ErrorCode::kInvalidArgument, "mixed profile arity");
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != game.actions(i).size()) {
      fail(ErrorCode::kInvalidArgument, "mixed profile does not match action grid");
    }
    double s = 0.0;
    for (double v : probs[i]) {
      if (!(v >= 0.0)) fail(ErrorCode::kInvalidArgument, "mixed profile has a negative weight");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      fail(ErrorCode::kInvalidArgument, "mixed profile weights must sum to 1");
    }
  }
}

ProfileMixture MixedProfile::product(const Game& game) const {
  const ProfileSpace& space = game.space();
  const std::size_t n = space.num_players();
  ProfileMixture s;
  std::vector<std::size_t> coords(n);
  for (ProfileIndex p = 0; p < space.total(); ++p) {
    space.decode(p, coords.data());
    double w = 1.0;
    for (std::size_t i = 0; i < n && w > 0.0; ++i) w *= probs[i][coords[i]];
    if (w > 0.0) {
      s.support.push_back(p);
      s.weights.push_back(w);
    }
  }
  return s;
}

std::vector<double> logit_probabilities(const std::vector<double>& utilities,
                                        double lambda) {
  LogitPerturbation{lambda}.validate();
  if (utilities.empty()) fail(ErrorCode::kInvalidArgument, "logit needs at least one action");
  const double mx = *std::max_element(utilities.begin(), utilities.end());
  std::vector<double> p(utilities.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp((utilities[k] - mx) / lambda);
    total += p[k];
  }
  for (auto& v : p) v /= total;
  return p;
}

std::size_t unique_minimizer(const Game& game, const MixedProfile& m,
                             std::size_t player, double tol) {
  const std::vector<std::size_t> tie =
      kl_minimizer_set(game, m.product(game), player, tol);
  if (tie.size() != 1) {
    fail(ErrorCode::kUnidentifiedModel,
         "player " + std::to_string(player) + " has " + std::to_string(tie.size()) +
             " best-fitting parameters");
  }
  return tie[0];
}

namespace {

std::vector<double> response(const Game& game, const ProfileMixture& sigma, std::size_t player,
                             double lambda, double tol) {
  const std::vector<std::size_t> tie = kl_minimizer_set(game, sigma, player, tol);
  if (tie.size() != 1) {
    fail(ErrorCode::kUnidentifiedModel,
         "player " + std::to_string(player) + " has " + std::to_string(tie.size()) +
             " best-fitting parameters");
  }
  const ParamBelief belief = ParamBelief::point(game.params(player).size(), tie[0]);
  const OpponentMixture opp = OpponentMixture::from(sigma, game.space(), player);
  return logit_probabilities(utility_vector(game, player, belief, opp), lambda);
}

}  // namespace

std::vector<double> logit_response(const Game& game, const MixedProfile& m,
                                   std::size_t player,
                                   const LogitPerturbation& perturb,
                                   double tol) {
  perturb.validate();
  m.validate(game);
  return response(game, m.product(game), player, perturb.lambda, tol);
}

MixedProfile phi_mixed_map(const Game& game, const MixedProfile& m,
                           const LogitPerturbation& perturb, double tol) {
  perturb.validate();
  m.validate(game);
  const ProfileMixture sigma = m.product(game);
  MixedProfile out;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    out.probs.push_back(response(game, sigma, i, perturb.lambda, tol));
  }
  return out;
}

MixedProfileCloud phi_mixed_step(const Game& game,
                                 const MixedProfileCloud& cloud,
                                 const LogitPerturbation& perturb,
                                 double tol) {
  MixedProfileCloud out(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) out[k] = phi_mixed_map(game, cloud[k], perturb, tol);
  });
  return out;
}

MixedProfileCloud simplex_mesh_cloud(const Game& game, int points_per_dim) {
  if (points_per_dim < 2) fail(ErrorCode::kInvalidArgument, "simplex mesh needs >= 2 points");
  const int divisions = points_per_dim - 1;
  const std::size_t n = game.num_players();
  std::vector<std::vector<std::vector<double>>> per(n);
  double total = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = game.actions(i).size();
    std::vector<int> parts(k, 0);
    auto rec = [&](auto&& self, std::size_t idx, int left) -> void {
      if (idx + 1 == k) {
        parts[idx] = left;
        std::vector<double> v(k);
        for (std::size_t j = 0; j < k; ++j) v[j] = static_cast<double>(parts[j]) / divisions;
        per[i].push_back(std::move(v));
        return;
      }
      for (int c = 0; c <= left; ++c) {
        parts[idx] = c;
        self(self, idx + 1, left - c);
      }
    };
    rec(rec, 0, divisions);
    total *= static_cast<double>(per[i].size());
    if (total > kMaxCloud) fail(ErrorCode::kInvalidArgument, "simplex mesh cloud too large");
  }
  MixedProfileCloud cloud;
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    MixedProfile m;
    for (std::size_t i = 0; i < n; ++i) m.probs.push_back(per[i][pos[i]]);
    cloud.push_back(std::move(m));
    std::size_t i = n;
    while (i-- > 0) {
      if (++pos[i] < per[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return cloud;
}

double mixed_distance(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) {
    for (std::size_t k = 0; k < a.probs[i].size(); ++k) {
      d = std::max(d, std::abs(a.probs[i][k] - b.probs[i][k]));
    }
  }
  return d;
}

double distance_to_cloud(const MixedProfile& m, const MixedProfileCloud& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cloud) best = std::min(best, mixed_distance(m, c));
  return best;
}

MixedProfileCloud dedupe(const MixedProfileCloud& cloud, double tol) {
  MixedProfileCloud out;
  for (const auto& c : cloud) {
    if (out.empty() || distance_to_cloud(c, out) > tol) out.push_back(c);
  }
  return out;
}

MixedIterateResult iterate_mixed(const Game& game, MixedProfileCloud cloud,
                                 const LogitPerturbation& perturb,
                                 int max_rounds, double conv_tol, double tol) {
  if (max_rounds < 1) fail(ErrorCode::kInvalidArgument, "max_rounds must be >= 1");
  MixedIterateResult res;
  for (int r = 1; r <= max_rounds; ++r) {
    MixedProfileCloud next = phi_mixed_step(game, cloud, perturb, tol);
    double change = 0.0;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      change = std::max(change, mixed_distance(cloud[k], next[k]));
    }
    cloud = std::move(next);
    res.rounds = r;
    res.last_change = change;
    if (change < conv_tol) {
      res.converged = true;
      break;
    }
  }
  res.cloud = std::move(cloud);
  return res;
}

MixedIterateResult anneal(const Game& game, MixedProfileCloud cloud,
                          const std::vector<double>& lambdas, int max_rounds,
                          double conv_tol, double tol) {
  if (lambdas.empty()) fail(ErrorCode::kInvalidArgument, "anneal needs at least one lambda");
  MixedIterateResult res;
  int rounds = 0;
  for (double lambda : lambdas) {
    res = iterate_mixed(game, std::move(cloud), LogitPerturbation{lambda}, max_rounds,
                        conv_tol, tol);
    rounds += res.rounds;
    cloud = res.cloud;
  }
  res.rounds = rounds;
  return res;
}

}  // namespace bnlab
