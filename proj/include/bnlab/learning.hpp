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

#ifndef BNLAB_LEARNING_HPP_
#define BNLAB_LEARNING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/mixed.hpp"
#include "bnlab/survivor.hpp"

namespace bnlab {

// Smoothed empirical forecast over one player's opponent sub-profiles:
// w nu + (1 - w) empirical, w = alpha0 / (alpha0 + t - 1) in period t.
class ForecastState {
 public:
  ForecastState(std::vector<double> prior, double alpha0);
  // Uniform prior over the player's opponent sub-profiles.
  static ForecastState uniform(const Game& game, std::size_t player,
                               double alpha0);

  // Records one observation (a dense opponent rank) and advances t.
  void update(std::size_t opponent_rank);
  // Period t; 1 before any observation.
  std::uint64_t period() const { return t_; }
  double prior_weight() const;
  double weight(std::size_t opponent_rank) const;
  std::vector<double> weights() const;
  // Lower bound alpha0 min(nu) / (alpha0 + t - 1).
  double support_floor() const;

 private:
  std::vector<double> prior_;
  std::vector<std::uint64_t> counts_;
  double alpha0_;
  double prior_min_;
  std::uint64_t t_ = 1;
};

// Log-weights over a parameter grid, shifted so the maximum is zero.
class PosteriorState {
 public:
  explicit PosteriorState(std::size_t grid_size);
  explicit PosteriorState(std::vector<double> log_prior);

  // log_w += ll, then renormalizes the shift. Throws DegenerateLikelihood
  // when no finite log-weight remains.
  void add_log_likelihood(const double* ll);
  // Gaussian kernel: log_w -= (y - theta r)^2 / 2.
  void add_gaussian(const Grid& grid, double y, double rate);

  const std::vector<double>& log_weights() const { return log_w_; }
  std::vector<double> weights() const;
  double mean(const Grid& grid) const;
  // ln of the posterior mass on the indices where mask is nonzero.
  double log_mass(const std::vector<char>& mask) const;

 private:
  void renormalize();
  std::vector<double> log_w_;
};

struct RunConfig {
  int horizon = 10000;
  int replications = 10;
  std::uint64_t seed = 1;
  int thin = 100;
  double window = 0.2;
  double eps = 0.02;
  double alpha0 = 1.0;
  std::optional<LogitPerturbation> logit;
  std::optional<Grid> param_grid;

  static RunConfig from(const SimulationConfig& sim);
  void validate() const;
};

struct LearningTrace {
  int replication = 0;
  std::size_t num_players = 0;
  std::vector<ProfileIndex> profiles;     // [t]
  std::vector<double> outcomes;           // [t * n + i]
  std::vector<double> posterior_means;    // [t * n + i]
  // Snapshots every thin periods (and at the last period).
  std::vector<int> snapshot_periods;
  std::vector<std::vector<std::vector<double>>> posterior_snapshots;  // [s][i]
  // Forecast mean of the interaction term for linear-Gaussian players, or
  // the forecast weights for tabular players.
  std::vector<std::vector<std::vector<double>>> forecast_snapshots;   // [s][i]
  // Intended mixed strategies at each snapshot when a logit perturbation is
  // active.
  std::vector<MixedProfile> intended_snapshots;
  std::optional<MixedProfile> final_intended;
  // sigma_T as sorted (profile, count) pairs; weights are count / T.
  std::vector<std::pair<ProfileIndex, std::uint64_t>> empirical;

  std::size_t length() const { return profiles.size(); }
};

// Replay file: forced action indices per period, cycled.
struct ForcedPlay {
  std::vector<std::vector<std::size_t>> periods;
};

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t player,
                            std::uint64_t replication, std::uint64_t purpose);

LearningTrace run_episode(const Game& game, const RunConfig& cfg,
                          int replication,
                          const ForcedPlay* forced = nullptr);
// All replications, concurrently; ordered by replication.
std::vector<LearningTrace> run_replications(const Game& game,
                                            const RunConfig& cfg,
                                            const ForcedPlay* forced = nullptr);

// Empirical distribution at t reconstructed from the trace prefix.
std::vector<std::pair<ProfileIndex, std::uint64_t>> empirical_counts(
    const LearningTrace& trace, std::size_t t);

// Profiles visited in the final window fraction of the trace.
std::vector<ProfileIndex> limit_points(const LearningTrace& trace,
                                       double window);

// Sup-norm distance in action units from a profile to the nearest member.
double distance_to_set(const Game& game, ProfileIndex p, const SurvivorSet& s);

struct TraceContainment {
  int replication = 0;
  std::vector<ProfileIndex> limit_points;
  // Fraction of limit points within eps of the set.
  double inside_fraction = 0.0;
  // Fraction of final-window periods within eps of the set.
  double window_mass = 0.0;
  double max_distance = 0.0;
  bool pass = false;
};

struct ContainmentReport {
  std::vector<TraceContainment> traces;
  double pass_rate = 0.0;
  double eps = 0.0;
  double window = 0.0;
  std::string survivor_digest;
};

ContainmentReport containment_report(const Game& game,
                                     const std::vector<LearningTrace>& traces,
                                     const SurvivorSet& survivors, double eps,
                                     double window);

// Fixed-action run: plays profile every period and updates one player's
// posterior. Returns ln mu_t(E) every stride periods, where E is the set of
// grid points farther than band from the point-mass minimizer set.
struct DecayRun {
  std::vector<int> periods;
  std::vector<double> log_mass;
  PosteriorState posterior{1};
};
DecayRun fixed_action_run(const Game& game, std::size_t player,
                          ProfileIndex profile, int horizon, double band,
                          int stride, std::uint64_t seed, int replication);

}  // namespace bnlab

#endif  // BNLAB_LEARNING_HPP_
