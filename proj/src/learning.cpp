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

#include "bnlab/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bnlab/errors.hpp"
#include "bnlab/model_core.hpp"
#include "bnlab/parallel.hpp"
#include "bnlab/simd.hpp"

namespace bnlab {

namespace {

// exp() underflows to zero below this; such weights are skipped.
constexpr double kLogFloor = -700.0;
// Relative weights below e^-60 do not move the mean at double precision.
constexpr double kMeanFloor = -60.0;

enum Purpose : std::uint64_t { kOutcome = 0, kChoice = 1, kDecay = 2 };

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

ForecastState::ForecastState(std::vector<double> prior, double alpha0)
    : prior_(std::move(prior)), counts_(prior_.size(), 0), alpha0_(alpha0) {
  if (!(alpha0 > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha0 must be positive");
  if (prior_.empty()) fail(ErrorCode::kInvalidArgument, "forecast prior is empty");
  double s = 0.0;
  for (double w : prior_) {
    if (!(w > 0.0)) fail(ErrorCode::kInvalidArgument, "forecast prior needs full support");
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12) fail(ErrorCode::kInvalidArgument, "forecast prior must sum to 1");
  prior_min_ = *std::min_element(prior_.begin(), prior_.end());
}

ForecastState ForecastState::uniform(const Game& game, std::size_t player,
                                     double alpha0) {
  const std::size_t n = static_cast<std::size_t>(game.space().opponent_count(player));
  return ForecastState(std::vector<double>(n, 1.0 / static_cast<double>(n)), alpha0);
}

void ForecastState::update(std::size_t opponent_rank) {
  if (opponent_rank >= counts_.size()) fail(ErrorCode::kInvalidArgument, "opponent rank out of range");
  ++counts_[opponent_rank];
  ++t_;
}

double ForecastState::prior_weight() const {
  return alpha0_ / (alpha0_ + static_cast<double>(t_ - 1));
}

double ForecastState::weight(std::size_t r) const {
  const double w = prior_weight();
  const double obs = static_cast<double>(t_ - 1);
  const double emp = obs > 0.0 ? static_cast<double>(counts_[r]) / obs : 0.0;
  return w * prior_[r] + (1.0 - w) * emp;
}

std::vector<double> ForecastState::weights() const {
  std::vector<double> out(prior_.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = weight(r);
  return out;
}

double ForecastState::support_floor() const { return prior_weight() * prior_min_; }

PosteriorState::PosteriorState(std::size_t grid_size) : log_w_(grid_size, 0.0) {
  if (grid_size == 0) fail(ErrorCode::kInvalidArgument, "empty parameter grid");
}

PosteriorState::PosteriorState(std::vector<double> log_prior)
    : log_w_(std::move(log_prior)) {
  if (log_w_.empty()) fail(ErrorCode::kInvalidArgument, "empty parameter grid");
  renormalize();
}

void PosteriorState::renormalize() {
  const double mx = simd::max_value(log_w_.data(), log_w_.size());
  if (!std::isfinite(mx)) {
    fail(ErrorCode::kDegenerateLikelihood, "all likelihoods vanished");
  }
  simd::shift(log_w_.data(), log_w_.size(), -mx);
}

void PosteriorState::add_log_likelihood(const double* ll) {
  simd::add(log_w_.data(), ll, log_w_.size());
  renormalize();
}

void PosteriorState::add_gaussian(const Grid& grid, double y, double rate) {
  simd::gaussian_loglik_add(log_w_.data(), grid.data(), log_w_.size(), y, rate);
  renormalize();
}

std::vector<double> PosteriorState::weights() const {
  std::vector<double> w(log_w_.size(), 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (log_w_[j] < kLogFloor) continue;
    w[j] = std::exp(log_w_[j]);
    s += w[j];
  }
  for (auto& v : w) v /= s;
  return w;
}

double PosteriorState::mean(const Grid& grid) const {
  double s = 0.0, m = 0.0;
  for (std::size_t j = 0; j < log_w_.size(); ++j) {
    if (log_w_[j] < kMeanFloor) continue;
    const double w = std::exp(log_w_[j]);
    s += w;
    m += w * grid[j];
  }
  return m / s;
}

double PosteriorState::log_mass(const std::vector<char>& mask) const {
  // log-sum-exp over the masked entries minus over all entries.
  double mx_in = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < log_w_.size(); ++j) {
    if (mask[j]) mx_in = std::max(mx_in, log_w_[j]);
  }
  if (!std::isfinite(mx_in)) return -std::numeric_limits<double>::infinity();
  double s_in = 0.0, s_all = 0.0;
  for (std::size_t j = 0; j < log_w_.size(); ++j) {
    if (mask[j]) s_in += std::exp(log_w_[j] - mx_in);
    s_all += std::exp(log_w_[j]);
  }
  return mx_in + std::log(s_in) - std::log(s_all);
}

RunConfig RunConfig::from(const SimulationConfig& sim) {
  RunConfig c;
  c.horizon = sim.horizon;
  c.replications = sim.replications;
  c.seed = sim.seed;
  c.thin = sim.thin;
  c.window = sim.window;
  c.eps = sim.eps;
  c.alpha0 = sim.alpha0;
  if (sim.logit_lambda) c.logit = LogitPerturbation{*sim.logit_lambda};
  c.param_grid = sim.param_grid;
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (replications < 1) fail(ErrorCode::kInvalidArgument, "replications must be >= 1");
  if (thin < 1) fail(ErrorCode::kInvalidArgument, "thin must be >= 1");
  if (!(window > 0.0 && window < 1.0)) fail(ErrorCode::kInvalidArgument, "window must be in (0, 1)");
  if (!(eps >= 0.0)) fail(ErrorCode::kInvalidArgument, "eps must be >= 0");
  if (!(alpha0 > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha0 must be positive");
  if (logit) logit->validate();
}

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t player,
                            std::uint64_t replication, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(player), static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

namespace {

double prior_interaction_mean(const Game& game, std::size_t i) {
  const auto& g = game.gaussian(i).interaction;
  switch (g.kind) {
    case Interaction::Kind::kOne:
      return 1.0;
    case Interaction::Kind::kAction: {
      const auto& pts = game.actions(static_cast<std::size_t>(g.of)).points();
      double s = 0.0;
      for (double v : pts) s += v;
      return s / static_cast<double>(pts.size());
    }
    case Interaction::Kind::kClose: {
      const auto& a = game.actions(static_cast<std::size_t>(g.first)).points();
      const auto& b = game.actions(static_cast<std::size_t>(g.second)).points();
      std::uint64_t hits = 0;
      for (double x : a) {
        for (double y : b) hits += std::abs(x - y) < g.threshold ? 1 : 0;
      }
      return static_cast<double>(hits) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    }
  }
  return 1.0;
}

// Myopic learner for one player.
class Learner {
 public:
  Learner(const Game& game, std::size_t i, const RunConfig& cfg)
      : game_(game), i_(i), cfg_(cfg), gaussian_(game.is_gaussian(i)),
        grid_(gaussian_ && cfg.param_grid ? *cfg.param_grid : game.params(i)),
        post_(grid_.size()) {
    if (!gaussian_ && cfg.param_grid) {
      fail(ErrorCode::kInvalidArgument, "param_grid override needs linear-Gaussian players");
    }
    const std::size_t na = game.actions(i).size();
    if (gaussian_) {
      prior_eg_ = prior_interaction_mean(game, i);
      const Grid& a = game.actions(i);
      const auto& c = game.cost_table(i);
      for (std::size_t k = 0; k + 1 < na; ++k) {
        kinks_.push_back((c[k + 1] - c[k]) / (a[k + 1] - a[k]));
        if (k > 0 && kinks_[k] < kinks_[k - 1]) convex_ = false;
      }
    } else {
      forecast_.emplace(ForecastState::uniform(game, i, cfg.alpha0));
    }
    scores_.resize(na);
  }

  const Grid& grid() const { return grid_; }
  const PosteriorState& posterior() const { return post_; }

  double forecast_eg() const {
    const double w = cfg_.alpha0 / (cfg_.alpha0 + static_cast<double>(obs_));
    const double emp = obs_ > 0 ? sum_g_ / static_cast<double>(obs_) : 0.0;
    return w * prior_eg_ + (1.0 - w) * emp;
  }

  std::vector<double> forecast_snapshot() const {
    if (gaussian_) return {forecast_eg()};
    return forecast_->weights();
  }

  // Fills scores_ with subjective expected utilities.
  void utilities(double tbar) {
    const std::size_t na = scores_.size();
    if (gaussian_) {
      const double intercept = tbar * game_.gaussian(i_).alpha;
      const double slope = tbar * forecast_eg();
      simd::affine_scores(scores_.data(), game_.actions(i_).data(), game_.cost_table(i_).data(),
                          na, intercept, slope);
      return;
    }
    const ProfileSpace& space = game_.space();
    const std::vector<double> mu = post_.weights();
    const std::vector<double> f = forecast_->weights();
    std::fill(scores_.begin(), scores_.end(), 0.0);
    for (std::size_t r = 0; r < f.size(); ++r) {
      const ProfileIndex key = space.opponent_key(r, i_);
      for (std::size_t x = 0; x < na; ++x) {
        const double* row = game_.payoff_row(i_, space.with(key, i_, x));
        scores_[x] += f[r] * simd::dot(mu.data(), row, mu.size());
      }
    }
  }

  // Lowest-index member of the tol-band of best responses.
  std::size_t best_response(double tbar, double tol) {
    const std::size_t na = scores_.size();
    if (gaussian_ && convex_ && !kinks_.empty()) {
      const double intercept = tbar * game_.gaussian(i_).alpha;
      const double slope = tbar * forecast_eg();
      const auto& a = game_.actions(i_);
      const auto& c = game_.cost_table(i_);
      auto score = [&](std::size_t x) { return (intercept + slope * a[x]) - c[x]; };
      const std::size_t center = static_cast<std::size_t>(
          std::lower_bound(kinks_.begin(), kinks_.end(), slope) - kinks_.begin());
      std::size_t half = 2;
      while (true) {
        const std::size_t lo = center > half ? center - half : 0;
        const std::size_t hi = std::min(na - 1, center + half);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t x = lo; x <= hi; ++x) best = std::max(best, score(x));
        const bool lo_ok = lo == 0 || score(lo) < best - tol;
        const bool hi_ok = hi == na - 1 || score(hi) < best - tol;
        if ((lo_ok && hi_ok) || (lo == 0 && hi == na - 1)) {
          for (std::size_t x = lo; x <= hi; ++x) {
            if (score(x) >= best - tol) return x;
          }
        }
        half *= 4;
      }
    }
    utilities(tbar);
    const double mx = simd::max_value(scores_.data(), na);
    for (std::size_t x = 0; x < na; ++x) {
      if (scores_[x] >= mx - tol) return x;
    }
    return 0;
  }

  std::vector<double> intended(double tbar, double lambda) {
    utilities(tbar);
    return logit_probabilities(scores_, lambda);
  }

  void observe(ProfileIndex p, std::size_t y_index, double y) {
    if (gaussian_) {
      post_.add_gaussian(grid_, y, game_.model_rate(i_, p));
      sum_g_ += game_.interaction(i_, game_.space().without(p, i_));
    } else {
      post_.add_log_likelihood(game_.log_likelihood_row(i_, p, y_index));
      forecast_->update(static_cast<std::size_t>(
          game_.space().opponent_rank(game_.space().without(p, i_), i_)));
    }
    ++obs_;
  }

 private:
  const Game& game_;
  std::size_t i_;
  const RunConfig& cfg_;
  bool gaussian_;
  Grid grid_;
  PosteriorState post_;
  double prior_eg_ = 0.0;
  double sum_g_ = 0.0;
  std::uint64_t obs_ = 0;
  std::vector<double> kinks_;
  bool convex_ = true;
  std::optional<ForecastState> forecast_;
  std::vector<double> scores_;
};

std::size_t sample_index(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return k;
  }
  return p.size() - 1;
}

}  // namespace

LearningTrace run_episode(const Game& game, const RunConfig& cfg,
                          int replication, const ForcedPlay* forced) {
  cfg.validate();
  const std::size_t n = game.num_players();
  const ProfileSpace& space = game.space();
  if (forced) {
    if (forced->periods.empty()) fail(ErrorCode::kInvalidArgument, "replay has no periods");
    for (const auto& row : forced->periods) {
      if (row.size() != n) fail(ErrorCode::kInvalidArgument, "replay row arity");
      for (std::size_t i = 0; i < n; ++i) {
        if (row[i] >= space.size(i)) fail(ErrorCode::kInvalidArgument, "replay action out of range");
      }
    }
  }
  std::vector<Learner> learners;
  learners.reserve(n);
  std::vector<std::mt19937_64> out_rng, choice_rng;
  for (std::size_t i = 0; i < n; ++i) {
    learners.emplace_back(game, i, cfg);
    out_rng.push_back(make_stream(cfg.seed, i, static_cast<std::uint64_t>(replication), kOutcome));
    choice_rng.push_back(make_stream(cfg.seed, i, static_cast<std::uint64_t>(replication), kChoice));
  }
  const std::size_t horizon = static_cast<std::size_t>(cfg.horizon);
  LearningTrace tr;
  tr.replication = replication;
  tr.num_players = n;
  tr.profiles.resize(horizon);
  tr.outcomes.resize(horizon * n);
  tr.posterior_means.resize(horizon * n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::size_t> coords(n);
  std::vector<double> tbar(n);
  MixedProfile intended;
  intended.probs.resize(n);
  std::map<ProfileIndex, std::uint64_t> counts;

  for (std::size_t i = 0; i < n; ++i) tbar[i] = learners[i].posterior().mean(learners[i].grid());
  for (std::size_t t = 1; t <= horizon; ++t) {
    const bool snap = t % static_cast<std::size_t>(cfg.thin) == 0 || t == horizon;
    if (snap) {
      tr.snapshot_periods.push_back(static_cast<int>(t));
      std::vector<std::vector<double>> post, fc;
      for (std::size_t i = 0; i < n; ++i) {
        post.push_back(learners[i].posterior().weights());
        fc.push_back(learners[i].forecast_snapshot());
      }
      tr.posterior_snapshots.push_back(std::move(post));
      tr.forecast_snapshots.push_back(std::move(fc));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (forced) {
        coords[i] = forced->periods[(t - 1) % forced->periods.size()][i];
      } else if (cfg.logit) {
        intended.probs[i] = learners[i].intended(tbar[i], cfg.logit->lambda);
        coords[i] = sample_index(intended.probs[i], uniform01(choice_rng[i]));
      } else {
        coords[i] = learners[i].best_response(tbar[i], kDefaultTol);
      }
    }
    if (cfg.logit && !forced) {
      if (snap) tr.intended_snapshots.push_back(intended);
      if (t == horizon) tr.final_intended = intended;
    }
    const ProfileIndex p = space.encode(coords);
    tr.profiles[t - 1] = p;
    ++counts[p];
    for (std::size_t i = 0; i < n; ++i) {
      double y = 0.0;
      std::size_t yi = 0;
      if (game.is_gaussian(i)) {
        y = game.true_rate(i, p) * game.gaussian(i).theta_true + normal(out_rng[i]);
      } else {
        const TabularModel& tm = game.tabular(i);
        yi = sample_index(tm.truth[p], uniform01(out_rng[i]));
        y = tm.outcomes[yi];
      }
      learners[i].observe(p, yi, y);
      tr.outcomes[(t - 1) * n + i] = y;
      tbar[i] = learners[i].posterior().mean(learners[i].grid());
      tr.posterior_means[(t - 1) * n + i] = tbar[i];
    }
  }
  tr.empirical.assign(counts.begin(), counts.end());
  return tr;
}

std::vector<LearningTrace> run_replications(const Game& game,
                                            const RunConfig& cfg,
                                            const ForcedPlay* forced) {
  cfg.validate();
  std::vector<LearningTrace> out(static_cast<std::size_t>(cfg.replications));
  parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      out[r] = run_episode(game, cfg, static_cast<int>(r), forced);
    }
  });
  return out;
}

std::vector<std::pair<ProfileIndex, std::uint64_t>> empirical_counts(
    const LearningTrace& trace, std::size_t t) {
  std::map<ProfileIndex, std::uint64_t> counts;
  for (std::size_t k = 0; k < std::min(t, trace.profiles.size()); ++k) ++counts[trace.profiles[k]];
  return {counts.begin(), counts.end()};
}

std::vector<ProfileIndex> limit_points(const LearningTrace& trace,
                                       double window) {
  const std::size_t T = trace.profiles.size();
  if (T < 10) fail(ErrorCode::kInvalidArgument, "trace too short for limit detection");
  if (!(window > 0.0 && window < 1.0)) fail(ErrorCode::kInvalidArgument, "window must be in (0, 1)");
  const std::size_t len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(window * static_cast<double>(T))));
  std::vector<ProfileIndex> pts(trace.profiles.end() - static_cast<std::ptrdiff_t>(len),
                                trace.profiles.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

class SetDistance {
 public:
  SetDistance(const Game& game, const SurvivorSet& s) : game_(game) {
    n_ = game.num_players();
    std::vector<std::size_t> c(n_);
    s.for_each([&](ProfileIndex p) {
      game.space().decode(p, c.data());
      for (std::size_t i = 0; i < n_; ++i) values_.push_back(game.action_value(i, c[i]));
    });
  }

  double operator()(ProfileIndex p) const {
    std::vector<std::size_t> c(n_);
    game_.space().decode(p, c.data());
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = game_.action_value(i, c[i]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values_.size(); k += n_) {
      double d = 0.0;
      for (std::size_t i = 0; i < n_ && d < best; ++i) d = std::max(d, std::abs(values_[k + i] - v[i]));
      best = std::min(best, d);
      if (best == 0.0) break;
    }
    return best;
  }

 private:
  const Game& game_;
  std::size_t n_;
  std::vector<double> values_;
};

}  // namespace

double distance_to_set(const Game& game, ProfileIndex p, const SurvivorSet& s) {
  return SetDistance(game, s)(p);
}

ContainmentReport containment_report(const Game& game,
                                     const std::vector<LearningTrace>& traces,
                                     const SurvivorSet& survivors, double eps,
                                     double window) {
  if (!(eps >= 0.0)) fail(ErrorCode::kInvalidArgument, "eps must be >= 0");
  ContainmentReport rep;
  rep.eps = eps;
  rep.window = window;
  rep.survivor_digest = survivors.digest();
  const SetDistance dist(game, survivors);
  std::size_t passed = 0;
  for (const auto& tr : traces) {
    TraceContainment tc;
    tc.replication = tr.replication;
    tc.limit_points = limit_points(tr, window);
    std::map<ProfileIndex, double> d;
    std::size_t inside = 0;
    for (ProfileIndex p : tc.limit_points) {
      const double v = dist(p);
      d[p] = v;
      tc.max_distance = std::max(tc.max_distance, v);
      if (v <= eps) ++inside;
    }
    tc.inside_fraction = tc.limit_points.empty()
                             ? 0.0
                             : static_cast<double>(inside) / static_cast<double>(tc.limit_points.size());
    const std::size_t T = tr.profiles.size();
    const std::size_t len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(window * static_cast<double>(T))));
    std::size_t in_mass = 0;
    for (std::size_t k = T - len; k < T; ++k) in_mass += d[tr.profiles[k]] <= eps ? 1 : 0;
    tc.window_mass = static_cast<double>(in_mass) / static_cast<double>(len);
    tc.pass = inside == tc.limit_points.size() && !tc.limit_points.empty();
    passed += tc.pass ? 1 : 0;
    rep.traces.push_back(std::move(tc));
  }
  rep.pass_rate = traces.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(traces.size());
  return rep;
}

DecayRun fixed_action_run(const Game& game, std::size_t player,
                          ProfileIndex profile, int horizon, double band,
                          int stride, std::uint64_t seed, int replication) {
  if (horizon < 1 || stride < 1) fail(ErrorCode::kInvalidArgument, "horizon and stride must be >= 1");
  const Grid& grid = game.params(player);
  const auto mins = kl_minimizer_set(game, ProfileMixture::point(profile), player);
  std::vector<char> mask(grid.size(), 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t m : mins) {
      if (std::abs(grid[j] - grid[m]) <= band) mask[j] = 0;
    }
  }
  DecayRun run;
  run.posterior = PosteriorState(grid.size());
  auto rng = make_stream(seed, player, static_cast<std::uint64_t>(replication), kDecay);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 1; t <= horizon; ++t) {
    if (game.is_gaussian(player)) {
      const double y = game.true_rate(player, profile) * game.gaussian(player).theta_true + normal(rng);
      run.posterior.add_gaussian(grid, y, game.model_rate(player, profile));
    } else {
      const TabularModel& tm = game.tabular(player);
      const std::size_t yi = sample_index(tm.truth[profile], uniform01(rng));
      run.posterior.add_log_likelihood(game.log_likelihood_row(player, profile, yi));
    }
    if (t % stride == 0) {
      run.periods.push_back(t);
      run.log_mass.push_back(run.posterior.log_mass(mask));
    }
  }
  return run;
}

}  // namespace bnlab
