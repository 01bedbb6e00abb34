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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "bnlab/analytic.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/solver.hpp"
#include "test_util.hpp"

namespace bnlab {
namespace {

SigmaSearchPolicy policy_of(SigmaSearchPolicy::Kind kind) {
  SigmaSearchPolicy p;
  p.kind = kind;
  return p;
}

FixedPointResult fixed(const Game& game, Operator op,
                       SigmaSearchPolicy policy = policy_of(SigmaSearchPolicy::Kind::kAuto)) {
  IterateOptions o;
  o.op = op;
  return iterate_to_fixed(game, policy, 200, o);
}

std::pair<double, double> value_range(const Game& game, const SurvivorSet& s, std::size_t i) {
  double lo = 1e300, hi = -1e300;
  s.for_each([&](ProfileIndex p) {
    const double v = game.action_value(i, game.space().coord(p, i));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  return {lo, hi};
}

TEST(Solver, EffortQuadraticCollapsesToRoot) {
  const Game game(example_spec("effort-over-quadratic", ExampleGrid{}));
  const auto r = fixed(game, Operator::kGamma);
  ASSERT_TRUE(r.converged);
  // a^2 + (alpha - theta*) a - theta* alpha* = 0 with alpha = 2, theta* = alpha* = 1.
  const double root = (-1.0 + std::sqrt(5.0)) / 2.0;
  const auto [lo, hi] = value_range(game, r.survivors, 0);
  EXPECT_LE(std::abs(lo - root), 2e-3);
  EXPECT_LE(std::abs(hi - root), 2e-3);
}

TEST(Solver, EffortUnderconfidentMatchesCycleOracle) {
  const EffortExample ex = effort_under();
  const Game game(effort_spec(ex, ExampleGrid{}));
  const auto r = fixed(game, Operator::kGamma);
  ASSERT_TRUE(r.converged);
  auto T = [&](double a) {
    const double th = ex.theta_true * (ex.alpha_true + a) / (ex.alpha + a);
    return ex.cost.inverse_marginal(th);
  };
  // Crossed interval iteration from the full action range.
  double lo = 0.0, hi = game.actions(0).back();
  for (int k = 0; k < 100000; ++k) {
    const double nlo = T(hi), nhi = T(lo);
    if (nlo == lo && nhi == hi) break;
    lo = nlo;
    hi = nhi;
  }
  const auto [slo, shi] = value_range(game, r.survivors, 0);
  EXPECT_LE(std::abs(slo - lo), 2e-3);
  EXPECT_LE(std::abs(shi - hi), 2e-3);
  EXPECT_GT(hi - lo, 0.5);
}

TEST(Solver, NotConvergedWhenCapped) {
  const Game game(example_spec("effort-over-quadratic", ExampleGrid{}));
  IterateOptions o;
  const auto r = iterate_to_fixed(game, policy_of(SigmaSearchPolicy::Kind::kAuto), 1, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.history.size(), 1u);
}

TEST(Solver, HeuristicPoliciesAreInnerApproximations) {
  std::mt19937_64 rng(21);
  for (int g = 0; g < 25; ++g) {
    const Game game(testing::random_tabular_spec(rng));
    const SurvivorSet all = SurvivorSet::full(game.space());
    const SurvivorSet exact = gamma_apply(game, all, policy_of(SigmaSearchPolicy::Kind::kExactLP));
    auto grid = policy_of(SigmaSearchPolicy::Kind::kSimplexGrid);
    grid.mesh = 6;
    grid.max_support = 3;
    EXPECT_TRUE(gamma_apply(game, all, grid).subset_of(exact));
    auto dir = policy_of(SigmaSearchPolicy::Kind::kDirichletSample);
    dir.samples = 500;
    dir.seed = static_cast<std::uint64_t>(g);
    EXPECT_TRUE(gamma_apply(game, all, dir).subset_of(exact));
  }
}

TEST(Solver, StructuralPropertiesOnRandomGames) {
  std::mt19937_64 rng(77);
  const auto lp = policy_of(SigmaSearchPolicy::Kind::kExactLP);
  for (int g = 0; g < 60; ++g) {
    testing::RandomGameOptions opt;
    opt.players = g % 5 == 4 ? 3 : 2;
    opt.max_actions = opt.players == 3 ? 3 : 4;
    const Game game(testing::random_tabular_spec(rng, opt));
    const auto& sp = game.space();
    // Nested iterates.
    SurvivorSet b = SurvivorSet::full(sp);
    for (int k = 0; k < 50; ++k) {
      SurvivorSet next = gamma_apply(game, b, lp);
      next &= b;
      ASSERT_TRUE(next.subset_of(b));
      if (next == b) break;
      b = next;
    }
    const auto r = fixed(game, Operator::kGamma, lp);
    ASSERT_TRUE(r.converged);
    // Monotonicity on random nested pairs.
    for (int t = 0; t < 5; ++t) {
      SurvivorSet small(sp), big(sp);
      for (ProfileIndex p = 0; p < sp.total(); ++p) {
        const auto u = rng() % 4;
        if (u == 0) small.insert(p);
        if (u <= 1) big.insert(p);
      }
      if (small.empty()) continue;
      EXPECT_TRUE(gamma_apply(game, small, lp).subset_of(gamma_apply(game, big, lp)));
    }
    // Point-mass equilibria survive.
    for (ProfileIndex p = 0; p < sp.total(); ++p) {
      if (bne_check(game, p)) {
        EXPECT_TRUE(r.survivors.contains(p));
      }
    }
    // Phi on the fixed set.
    const auto members = r.survivors.members();
    for (int t = 0; t < 5; ++t) {
      ProfileMixture c;
      const std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) c.support.push_back(rng() % sp.total());
      std::sort(c.support.begin(), c.support.end());
      c.support.erase(std::unique(c.support.begin(), c.support.end()), c.support.end());
      c.weights = testing::random_distribution(rng, c.support.size(), 0.01);
      bool inside = true;
      for (ProfileIndex p : c.support) inside = inside && r.survivors.contains(p);
      EXPECT_EQ(phi_apply(game, c, r.survivors, lp), inside);
    }
    // Witness replay.
    EXPECT_EQ(r.profile_witnesses.size(), members.size());
    for (const auto& w : r.profile_witnesses) {
      const Certificate c = certify(game, w.profile, w.sigma);
      EXPECT_TRUE(c.ok);
      EXPECT_EQ(c, w.certificate);
    }
  }
}

TEST(Solver, OperatorChainOnProductSets) {
  std::mt19937_64 rng(8);
  const auto lp = policy_of(SigmaSearchPolicy::Kind::kExactLP);
  for (int g = 0; g < 30; ++g) {
    const Game game(testing::random_tabular_spec(rng));
    const auto& sp = game.space();
    std::vector<std::vector<std::size_t>> sets(game.num_players());
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t x = 0; x < sp.size(i); ++x) {
        if (rng() % 3 != 0 || x == 0) sets[i].push_back(x);
      }
    }
    const SurvivorSet a = SurvivorSet::product(sp, sets);
    // An empty image is reported as an error; read it as the empty set.
    auto or_empty = [&](auto&& apply) {
      try {
        return apply();
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kEmptySurvivorSet);
        return SurvivorSet(sp);
      }
    };
    SurvivorSet gam = gamma_apply(game, a, lp);
    gam &= a;
    const SurvivorSet weak = or_empty([&] { return gamma_weak_apply(game, a, lp); });
    const SurvivorSet bp = or_empty([&] { return gamma_bp_apply(game, a, lp); });
    EXPECT_TRUE(gam.subset_of(weak));
    EXPECT_TRUE(weak.subset_of(bp));
    EXPECT_TRUE(bp.is_product());
  }
}

TEST(Solver, BpRequiresProductSet) {
  std::mt19937_64 rng(2);
  const Game game(testing::random_tabular_spec(rng));
  SurvivorSet a(game.space());
  a.insert(0);
  a.insert(game.space().total() - 1);
  EXPECT_THROW(gamma_bp_apply(game, a, policy_of(SigmaSearchPolicy::Kind::kExactLP)), Error);
}

TEST(Solver, CsiGammaEqualsBpAndWeak) {
  std::mt19937_64 rng(404);
  testing::RandomGameOptions opt;
  opt.csi = true;
  const auto lp = policy_of(SigmaSearchPolicy::Kind::kExactLP);
  for (int g = 0; g < 30; ++g) {
    const Game game(testing::random_tabular_spec(rng, opt));
    const auto gam = fixed(game, Operator::kGamma, lp);
    const auto bp = fixed(game, Operator::kBernheimPearce, lp);
    const auto weak = fixed(game, Operator::kWeak, lp);
    EXPECT_EQ(gam.survivors, bp.survivors) << "game " << g;
    EXPECT_EQ(weak.survivors, bp.survivors) << "game " << g;
  }
}

TEST(Solver, TeamCsiSingletonVersusFullBox) {
  ExampleGrid grid;
  grid.action_step = 0.05;
  grid.theta_points = 101;
  const Game game(team_spec(team_csi(), grid));
  const auto gam = fixed(game, Operator::kGamma);
  const auto bp = fixed(game, Operator::kBernheimPearce);
  ASSERT_EQ(gam.survivors.count(), 1u);
  const auto c = game.space().decode(gam.survivors.members()[0]);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(game.action_value(i, c[i]), 1.0);
  // Every player's actions in [0, 1].
  std::vector<std::vector<std::size_t>> box(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t x = 0; x < game.actions(i).size(); ++x) {
      if (game.action_value(i, x) <= 1.0 + 1e-12) box[i].push_back(x);
    }
  }
  EXPECT_EQ(bp.survivors, SurvivorSet::product(game.space(), box));
}

TEST(Solver, MomentBoxMatchesBruteForce) {
  ExampleGrid grid;
  grid.action_step = 0.1;
  grid.theta_points = 21;
  const Game game(team_spec(team_misspecified(), grid));
  const auto& sp = game.space();
  std::mt19937_64 rng(4);
  SurvivorSet a(sp);
  for (ProfileIndex p = 0; p < sp.total(); ++p) {
    if (rng() % 5 == 0) a.insert(p);
  }
  const MomentBox box = moment_box(game, a);
  for (std::size_t i = 0; i < 3; ++i) {
    double tlo = 1e300, thi = -1e300, glo = 1e300, ghi = -1e300;
    a.for_each([&](ProfileIndex p) {
      const auto c = sp.decode(p);
      const double a0 = game.action_value(0, c[0]);
      double gv;
      if (i == 0) {
        gv = std::abs(game.action_value(1, c[1]) - game.action_value(2, c[2])) < 0.105 ? 1.0 : 0.0;
      } else {
        gv = a0;
      }
      const double ai = game.action_value(i, c[i]);
      const double r = 2.0 + ai * gv, s = 1.0 + ai * gv;
      tlo = std::min(tlo, s / r);
      thi = std::max(thi, s / r);
      glo = std::min(glo, gv);
      ghi = std::max(ghi, gv);
    });
    EXPECT_NEAR(box.theta_m[i].first, tlo, 1e-12);
    EXPECT_NEAR(box.theta_m[i].second, thi, 1e-12);
    EXPECT_DOUBLE_EQ(box.interaction[i].first, glo);
    EXPECT_DOUBLE_EQ(box.interaction[i].second, ghi);
  }
}

TEST(Solver, DeterministicAcrossWorkerCounts) {
  const Game effort(example_spec("effort-under", ExampleGrid{}));
  std::mt19937_64 rng(6);
  const Game tab(testing::random_tabular_spec(rng));
  auto dir = policy_of(SigmaSearchPolicy::Kind::kDirichletSample);
  dir.samples = 3000;
  std::vector<std::string> digests;
  for (const char* w : {"1", "3"}) {
    setenv("BNLAB_THREADS", w, 1);
    const auto a = fixed(effort, Operator::kGamma);
    const auto b = fixed(tab, Operator::kGamma, dir);
    std::string d = a.survivors.digest() + b.survivors.digest();
    for (const auto& pw : a.profile_witnesses) d += std::to_string(pw.sigma.weights[0]);
    digests.push_back(d);
  }
  unsetenv("BNLAB_THREADS");
  EXPECT_EQ(digests[0], digests[1]);
}

TEST(Solver, PolicyNamesRoundTrip) {
  for (auto k : {SigmaSearchPolicy::Kind::kAuto, SigmaSearchPolicy::Kind::kExactLP,
                 SigmaSearchPolicy::Kind::kSimplexGrid, SigmaSearchPolicy::Kind::kDirichletSample,
                 SigmaSearchPolicy::Kind::kStructuredMoments}) {
    EXPECT_EQ(SigmaSearchPolicy::parse_kind(SigmaSearchPolicy::kind_name(k)), k);
  }
  EXPECT_THROW(SigmaSearchPolicy::parse_kind("nope"), Error);
  EXPECT_THROW(parse_operator("nope"), Error);
  EXPECT_EQ(parse_operator("bp"), Operator::kBernheimPearce);
}

}  // namespace
}  // namespace bnlab
