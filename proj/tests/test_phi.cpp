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


#include <gtest/gtest.h>

#include <cmath>

#include "bnlab/errors.hpp"
#include "bnlab/mixed.hpp"

namespace bnlab {
namespace {

// Two players, two actions; action 1 raises the chance of the good outcome
// and carries a bonus, so (1, 1) is the strict equilibrium.
GameSpec dominance_spec(bool identified = true) {
  GameSpec spec;
  const ProfileSpace sp({2, 2});
  for (std::size_t i = 0; i < 2; ++i) {
    PlayerSpec p;
    p.name = i == 0 ? "row" : "col";
    p.actions = Grid::uniform(0.0, 1.0, 2);
    p.params = Grid::uniform(0.0, 1.0, 2);
    TabularModel t;
    t.outcomes = {0.0, 1.0};
    t.family.resize(2);
    for (ProfileIndex q = 0; q < sp.total(); ++q) {
      const double own = static_cast<double>(sp.coord(q, i));
      const double good = 0.3 + 0.4 * own;
      t.truth.push_back({1.0 - good, good});
      t.family[0].push_back({1.0 - good, good});
      const double alt = identified ? 0.5 : good;
      t.family[1].push_back({1.0 - alt, alt});
    }
    p.model = t;
    p.payoff.kind = PayoffSpec::Kind::kTable;
    p.payoff.table = {{0.0, 1.0}, {0.2, 1.2}};
    spec.players.push_back(p);
  }
  return spec;
}

TEST(Logit, TwoActionClosedForm) {
  for (double u0 : {-1.3, 0.0, 0.4}) {
    for (double u1 : {-0.2, 0.9, 2.5}) {
      const auto p = logit_probabilities({u0, u1}, 1.0);
      EXPECT_NEAR(p[1], 1.0 / (1.0 + std::exp(u0 - u1)), 1e-12);
      EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
    }
  }
  const auto q = logit_probabilities({0.0, 1.0, 0.5}, 2.0);
  const double z = 1.0 + std::exp(0.5) + std::exp(0.25);
  EXPECT_NEAR(q[0], 1.0 / z, 1e-12);
  EXPECT_NEAR(q[1], std::exp(0.5) / z, 1e-12);
  EXPECT_THROW(logit_probabilities({0.0}, 0.0), Error);
}

TEST(Logit, ResponseUsesMinimizer) {
  const Game game(dominance_spec());
  MixedProfile m{{{0.5, 0.5}, {0.2, 0.8}}};
  EXPECT_EQ(unique_minimizer(game, m, 0), 0u);
  const auto r = logit_response(game, m, 0, LogitPerturbation{1.0});
  // EU(1) - EU(0) = 0.4 + 0.2 under the true model.
  EXPECT_NEAR(r[1], 1.0 / (1.0 + std::exp(-0.6)), 1e-12);
}

TEST(Logit, UnidentifiedModelThrows) {
  const Game game(dominance_spec(false));
  MixedProfile m{{{0.5, 0.5}, {0.5, 0.5}}};
  try {
    unique_minimizer(game, m, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnidentifiedModel);
  }
}

TEST(Mixed, MeshCloudSize) {
  const Game game(dominance_spec());
  EXPECT_EQ(simplex_mesh_cloud(game, 11).size(), 121u);
  EXPECT_EQ(simplex_mesh_cloud(game, 2).size(), 4u);
  for (const auto& m : simplex_mesh_cloud(game, 5)) m.validate(game);
}

TEST(Mixed, AnnealedCloudContractsToStrictEquilibrium) {
  const Game game(dominance_spec());
  const auto r = anneal(game, simplex_mesh_cloud(game, 11), {1.0, 0.1, 0.01, 0.001}, 200, 1e-8);
  const MixedProfile target = MixedProfile::pure(game, game.space().encode({1, 1}));
  for (const auto& m : r.cloud) EXPECT_LT(mixed_distance(m, target), 1e-3);
  EXPECT_EQ(dedupe(r.cloud, 1e-6).size(), 1u);
}

TEST(Mixed, IteratedPointIsAFixedPoint) {
  const Game game(dominance_spec());
  const auto r = iterate_mixed(game, {MixedProfile{{{0.9, 0.1}, {0.5, 0.5}}}},
                               LogitPerturbation{0.5}, 500, 1e-12);
  ASSERT_TRUE(r.converged);
  const MixedProfile next = phi_mixed_map(game, r.cloud[0], LogitPerturbation{0.5});
  EXPECT_LT(mixed_distance(next, r.cloud[0]), 1e-10);
  // Closed form: each player's response is logit of the fixed gap 0.6.
  EXPECT_NEAR(r.cloud[0].probs[0][1], 1.0 / (1.0 + std::exp(-0.6 / 0.5)), 1e-12);
}

TEST(Mixed, DistanceToCloud) {
  const MixedProfile a{{{1.0, 0.0}}}, b{{{0.7, 0.3}}}, c{{{0.0, 1.0}}};
  EXPECT_DOUBLE_EQ(mixed_distance(a, b), 0.30000000000000004);
  EXPECT_DOUBLE_EQ(distance_to_cloud(b, {a, c}), mixed_distance(a, b));
}

}  // namespace
}  // namespace bnlab
