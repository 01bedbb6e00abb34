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
#include <limits>
#include <map>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "bnlab/analytic.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/learning.hpp"
#include "bnlab/solver.hpp"
#include "test_util.hpp"

namespace bnlab {
namespace {

TEST(Forecast, SmoothedEmpiricalWeights) {
  ForecastState f({0.25, 0.25, 0.5}, 2.0);
  EXPECT_EQ(f.period(), 1u);
  EXPECT_DOUBLE_EQ(f.prior_weight(), 1.0);
  EXPECT_EQ(f.weights(), (std::vector<double>{0.25, 0.25, 0.5}));
  f.update(2);
  f.update(2);
  f.update(0);
  // t = 4: w = 2 / (2 + 3).
  const double w = 0.4;
  EXPECT_NEAR(f.weight(0), w * 0.25 + (1 - w) / 3.0, 1e-15);
  EXPECT_NEAR(f.weight(1), w * 0.25, 1e-15);
  EXPECT_NEAR(f.weight(2), w * 0.5 + (1 - w) * 2.0 / 3.0, 1e-15);
  for (double v : f.weights()) EXPECT_GE(v, f.support_floor());
  EXPECT_NEAR(f.support_floor(), w * 0.25, 1e-15);
  EXPECT_THROW(ForecastState({0.5, 0.6}, 1.0), Error);
  EXPECT_THROW(ForecastState({0.0, 1.0}, 1.0), Error);
}

TEST(Posterior, GaussianMatchesDirectBayes) {
  const Grid grid = Grid::uniform(0.0, 2.0, 41);
  PosteriorState post(grid.size());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> direct(grid.size(), 1.0);
  for (int t = 0; t < 30; ++t) {
    const double r = 1.0 + 0.1 * t, y = 0.8 * r + z(rng);
    post.add_gaussian(grid, y, r);
    double s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double d = y - grid[j] * r;
      direct[j] *= std::exp(-0.5 * d * d);
      s += direct[j];
    }
    for (auto& v : direct) v /= s;
  }
  const auto w = post.weights();
  double mean = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_NEAR(w[j], direct[j], 1e-12);
    mean += direct[j] * grid[j];
  }
  EXPECT_NEAR(post.mean(grid), mean, 1e-12);
  std::vector<char> mask(grid.size(), 0);
  double in = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    mask[j] = 1;
    in += direct[j];
  }
  EXPECT_NEAR(post.log_mass(mask), std::log(in), 1e-9);
}

TEST(Posterior, DegenerateLikelihoodThrows) {
  PosteriorState post(3);
  const double ninf = -std::numeric_limits<double>::infinity();
  const double ll[3] = {ninf, ninf, ninf};
  try {
    post.add_log_likelihood(ll);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateLikelihood);
  }
}

TEST(Streams, SeededAndSeparated) {
  auto a = make_stream(7, 0, 3, 0), b = make_stream(7, 0, 3, 0), c = make_stream(7, 0, 3, 1);
  const auto x = a(), y = b(), w = c();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, w);
  EXPECT_NE(make_stream(7, 1, 3, 0)(), x);
  EXPECT_NE(make_stream(8, 0, 3, 0)(), x);
}

GameSpec small_effort() {
  ExampleGrid g;
  g.action_step = 0.01;
  g.theta_points = 401;
  return effort_spec(effort_over_quadratic(), g);
}

TEST(Episode, DeterministicAndThreadIndependent) {
  const Game game(small_effort());
  RunConfig cfg;
  cfg.horizon = 3000;
  cfg.replications = 5;
  cfg.seed = 99;
  setenv("BNLAB_THREADS", "1", 1);
  const auto a = run_replications(game, cfg);
  setenv("BNLAB_THREADS", "3", 1);
  const auto b = run_replications(game, cfg);
  unsetenv("BNLAB_THREADS");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].profiles, b[r].profiles);
    EXPECT_EQ(a[r].outcomes, b[r].outcomes);
    EXPECT_EQ(a[r].posterior_means, b[r].posterior_means);
    EXPECT_EQ(a[r].replication, static_cast<int>(r));
  }
  EXPECT_NE(a[0].outcomes, a[1].outcomes);
  const auto full = empirical_counts(a[0], a[0].length());
  EXPECT_EQ(full, a[0].empirical);
  std::uint64_t total = 0;
  for (const auto& [p, n] : full) total += n;
  EXPECT_EQ(total, 3000u);
}

TEST(Episode, OutcomesFollowTrueModel) {
  const Game game(small_effort());
  RunConfig cfg;
  cfg.horizon = 20000;
  const auto tr = run_episode(game, cfg, 0);
  // Residuals y - true mean are standard normal.
  double s = 0.0, ss = 0.0;
  for (std::size_t t = 0; t < tr.length(); ++t) {
    const double e = tr.outcomes[t] - game.true_rate(0, tr.profiles[t]) * 1.0;
    s += e;
    ss += e * e;
  }
  const double n = static_cast<double>(tr.length());
  EXPECT_LT(std::abs(s / n), 5.0 / std::sqrt(n));
  EXPECT_NEAR(ss / n, 1.0, 0.05);
  EXPECT_EQ(tr.snapshot_periods.back(), 20000);
  EXPECT_EQ(tr.snapshot_periods.front(), cfg.thin);
}

TEST(Episode, ForcedReplayIsFollowed) {
  const Game game(small_effort());
  RunConfig cfg;
  cfg.horizon = 100;
  ForcedPlay f{{{0}, {200}, {7}}};
  const auto tr = run_episode(game, cfg, 0, &f);
  for (std::size_t t = 0; t < tr.length(); ++t) {
    EXPECT_EQ(game.space().coord(tr.profiles[t], 0), f.periods[t % 3][0]);
  }
  ForcedPlay bad{{{5000}}};
  EXPECT_THROW(run_episode(game, cfg, 0, &bad), Error);
}

TEST(Containment, LimitPointsAndDistance) {
  const Game game(small_effort());
  LearningTrace tr;
  for (int t = 0; t < 100; ++t) tr.profiles.push_back(static_cast<ProfileIndex>(t < 90 ? 10 : 60 + t % 2));
  EXPECT_EQ(limit_points(tr, 0.1), (std::vector<ProfileIndex>{60, 61}));
  EXPECT_EQ(limit_points(tr, 0.2), (std::vector<ProfileIndex>{10, 60, 61}));
  SurvivorSet s(game.space());
  s.insert(62);
  s.insert(100);
  EXPECT_NEAR(distance_to_set(game, 60, s), 0.02, 1e-12);
  EXPECT_NEAR(distance_to_set(game, 120, s), 0.2, 1e-12);
  const auto rep = containment_report(game, {tr}, s, 0.015, 0.1);
  EXPECT_EQ(rep.traces[0].inside_fraction, 0.5);
  EXPECT_EQ(rep.traces[0].window_mass, 0.5);
  EXPECT_FALSE(rep.traces[0].pass);
  EXPECT_EQ(rep.pass_rate, 0.0);
  EXPECT_TRUE(containment_report(game, {tr}, s, 0.02 + 1e-9, 0.1).traces[0].pass);
}

TEST(Containment, EffortLearnersStayInsideSurvivors) {
  const Game game(small_effort());
  IterateOptions o;
  const auto fp = iterate_to_fixed(game, SigmaSearchPolicy{}, 100, o);
  RunConfig cfg;
  cfg.horizon = 20000;
  cfg.replications = 10;
  cfg.eps = 0.02;
  const auto rep = containment_report(game, run_replications(game, cfg), fp.survivors, cfg.eps, cfg.window);
  EXPECT_GE(rep.pass_rate, 0.9);
  ForcedPlay adversarial{{{0}, {game.actions(0).size() - 1}}};
  const auto neg = containment_report(game, run_replications(game, cfg, &adversarial), fp.survivors,
                                      cfg.eps, cfg.window);
  EXPECT_EQ(neg.pass_rate, 0.0);
}

TEST(Decay, PosteriorMassAwayFromMinimizerShrinks) {
  const Game game(small_effort());
  const ProfileIndex p = 50;
  const DecayRun run = fixed_action_run(game, 0, p, 4000, 0.05, 100, 5, 0);
  ASSERT_EQ(run.periods.size(), 40u);
  // OLS slope of log mass on t with a one-sided t-test.
  const double n = static_cast<double>(run.periods.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t k = 0; k < run.periods.size(); ++k) {
    mt += run.periods[k] / n;
    ml += run.log_mass[k] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < run.periods.size(); ++k) {
    sxx += (run.periods[k] - mt) * (run.periods[k] - mt);
    sxy += (run.periods[k] - mt) * (run.log_mass[k] - ml);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t k = 0; k < run.periods.size(); ++k) {
    const double e = run.log_mass[k] - ml - slope * (run.periods[k] - mt);
    sse += e * e;
  }
  const double se = std::sqrt(sse / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double pval = boost::math::cdf(dist, slope / se);
  EXPECT_LT(slope, 0.0);
  EXPECT_LT(pval, 0.01);
}

TEST(RunConfig, ValidatesAndRejectsTabularOverride) {
  RunConfig c;
  c.window = 1.5;
  EXPECT_THROW(c.validate(), Error);
  std::mt19937_64 rng(3);
  const Game game(testing::random_tabular_spec(rng));
  RunConfig ok;
  ok.horizon = 200;
  EXPECT_NO_THROW(run_episode(game, ok, 0));
  ok.param_grid = Grid::uniform(0.0, 1.0, 3);
  EXPECT_THROW(run_episode(game, ok, 0), Error);
}

TEST(Episode, TabularLearnersRunAndLogitSnapshots) {
  std::mt19937_64 rng(12);
  const Game game(testing::random_tabular_spec(rng));
  RunConfig cfg;
  cfg.horizon = 500;
  cfg.thin = 50;
  cfg.logit = LogitPerturbation{0.2};
  const auto tr = run_episode(game, cfg, 1);
  EXPECT_EQ(tr.intended_snapshots.size(), tr.snapshot_periods.size());
  ASSERT_TRUE(tr.final_intended.has_value());
  tr.final_intended->validate(game);
  const auto& fc = tr.forecast_snapshots.back();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    double s = 0.0;
    for (double v : fc[i]) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace bnlab
