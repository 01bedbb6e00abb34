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

#ifndef BNLAB_GAME_HPP_
#define BNLAB_GAME_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bnlab/cost.hpp"
#include "bnlab/grid.hpp"

namespace bnlab {

// Multiplier g(a^{-i}) on a player's own action in the linear mean
// (alpha + a^i g) theta.
struct Interaction {
  enum class Kind { kOne, kAction, kClose };
  Kind kind = Kind::kOne;
  int of = -1;        // kAction: g = a^{of}
  int first = -1;     // kClose: g = 1{|a^first - a^second| < threshold}
  int second = -1;
  double threshold = 0.0;

  double eval(const double* action_values) const;
  bool operator==(const Interaction&) const = default;
};

// Unit-variance Gaussian outcome. Model mean (alpha + a^i g) theta, true
// mean (alpha_true + a^i g) theta_true.
struct GaussianLinearModel {
  double alpha = 1.0;
  double alpha_true = 1.0;
  double theta_true = 1.0;
  Interaction interaction;
  bool operator==(const GaussianLinearModel&) const = default;
};

// Finite outcomes. truth[p][y] is the true kernel at profile p and
// family[j][p][y] the model at parameter grid point j.
struct TabularModel {
  std::vector<double> outcomes;
  std::vector<std::vector<double>> truth;
  std::vector<std::vector<std::vector<double>>> family;
  bool operator==(const TabularModel&) const = default;
};

using ConsequenceModel = std::variant<GaussianLinearModel, TabularModel>;

struct PayoffSpec {
  enum class Kind { kOutcomeMinusCost, kTable };
  Kind kind = Kind::kOutcomeMinusCost;
  CostSpec cost;
  std::vector<std::vector<double>> table;  // [own action][outcome]
  bool operator==(const PayoffSpec&) const = default;
};

struct PlayerSpec {
  std::string name;
  Grid actions;
  Grid params;
  ConsequenceModel model;
  PayoffSpec payoff;
  bool operator==(const PlayerSpec&) const = default;
};

struct SolverConfig {
  std::string policy = "auto";
  int mesh = 10;
  int max_support = 3;
  int samples = 2000;
  std::uint64_t seed = 1;
  int max_rounds = 500;
  double tol = 1e-9;
  bool operator==(const SolverConfig&) const = default;
};

struct SimulationConfig {
  int horizon = 10000;
  int replications = 10;
  std::uint64_t seed = 1;
  int thin = 100;
  double window = 0.2;
  double eps = 0.02;
  double alpha0 = 1.0;
  std::optional<double> logit_lambda;
  // Parameter grid used by the learners in place of each player's grid.
  std::optional<Grid> param_grid;
  bool operator==(const SimulationConfig&) const = default;
};

struct GameSpec {
  int version = 1;
  std::string name;
  std::vector<PlayerSpec> players;
  SolverConfig solver;
  SimulationConfig simulation;
  bool operator==(const GameSpec&) const = default;
};

// KL divergence between two finite distributions with 0 ln(0/p) = 0.
// Throws NonFiniteKL when the model puts zero mass on a possible outcome.
double kl_finite(const std::vector<double>& truth,
                 const std::vector<double>& model);

// Validated game with precomputed per-profile tables.
class Game {
 public:
  explicit Game(GameSpec spec);

  const GameSpec& spec() const { return spec_; }
  const ProfileSpace& space() const { return space_; }
  std::size_t num_players() const { return spec_.players.size(); }
  const PlayerSpec& player(std::size_t i) const { return spec_.players[i]; }
  const Grid& actions(std::size_t i) const { return spec_.players[i].actions; }
  const Grid& params(std::size_t i) const { return spec_.players[i].params; }

  bool is_gaussian(std::size_t i) const {
    return std::holds_alternative<GaussianLinearModel>(spec_.players[i].model);
  }
  bool all_gaussian() const;
  const GaussianLinearModel& gaussian(std::size_t i) const {
    return std::get<GaussianLinearModel>(spec_.players[i].model);
  }
  const TabularModel& tabular(std::size_t i) const {
    return std::get<TabularModel>(spec_.players[i].model);
  }

  double action_value(std::size_t i, std::size_t x) const {
    return spec_.players[i].actions[x];
  }
  // c(x) per own action; zero for table payoffs.
  const std::vector<double>& cost_table(std::size_t i) const {
    return cost_[i];
  }

  // Gaussian helpers.
  double interaction(std::size_t i, ProfileIndex p) const;
  double model_rate(std::size_t i, ProfileIndex p) const;
  double true_rate(std::size_t i, ProfileIndex p) const;

  // Tabular helpers; only valid for tabular players.
  std::size_t num_outcomes(std::size_t i) const;
  // Rows are laid out per profile, contiguous over the parameter grid.
  double kl_table(std::size_t i, std::size_t theta, ProfileIndex p) const {
    return kl_[i][p * params(i).size() + theta];
  }
  const double* kl_row(std::size_t i, ProfileIndex p) const {
    return kl_[i].data() + p * params(i).size();
  }
  // Subjective expected payoff sum_y pi(a^i, y) q_theta(y | p).
  double payoff_table(std::size_t i, std::size_t theta, ProfileIndex p) const {
    return payoff_[i][p * params(i).size() + theta];
  }
  const double* payoff_row(std::size_t i, ProfileIndex p) const {
    return payoff_[i].data() + p * params(i).size();
  }
  double log_likelihood_table(std::size_t i, std::size_t theta, ProfileIndex p,
                              std::size_t y) const {
    return logq_[i][(p * num_outcomes(i) + y) * params(i).size() + theta];
  }
  // ln q_theta(y | p) for all theta, contiguous.
  const double* log_likelihood_row(std::size_t i, ProfileIndex p,
                                   std::size_t y) const {
    return logq_[i].data() + (p * num_outcomes(i) + y) * params(i).size();
  }
  double outcome_payoff(std::size_t i, std::size_t own_action,
                        std::size_t y) const;

 private:
  void build_tabular(std::size_t i);

  GameSpec spec_;
  ProfileSpace space_;
  std::vector<std::vector<double>> cost_;
  std::vector<std::vector<double>> kl_;
  std::vector<std::vector<double>> payoff_;
  std::vector<std::vector<double>> logq_;
};

}  // namespace bnlab

#endif  // BNLAB_GAME_HPP_
