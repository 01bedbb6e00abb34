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

#include "bnlab/game.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bnlab/errors.hpp"

namespace bnlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonFiniteKL: return "NonFiniteKL";
    case ErrorCode::kEmptySurvivorSet: return "EmptySurvivorSet";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kUnidentifiedModel: return "UnidentifiedModel";
    case ErrorCode::kDegenerateLikelihood: return "DegenerateLikelihood";
    case ErrorCode::kNotCorrectlySpecified: return "NotCorrectlySpecified";
    case ErrorCode::kUnknownExample: return "UnknownExample";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

double Interaction::eval(const double* v) const {
  switch (kind) {
    case Kind::kOne: return 1.0;
    case Kind::kAction: return v[of];
    case Kind::kClose: return std::abs(v[first] - v[second]) < threshold ? 1.0 : 0.0;
  }
  return 1.0;
}

double kl_finite(const std::vector<double>& truth,
                 const std::vector<double>& model) {
  if (truth.size() != model.size()) {
    fail(ErrorCode::kInvalidArgument, "outcome spaces differ");
  }
  double k = 0.0;
  for (std::size_t y = 0; y < truth.size(); ++y) {
    if (truth[y] <= 0.0) continue;
    if (model[y] <= 0.0) {
      fail(ErrorCode::kNonFiniteKL,
           "model assigns zero probability to outcome " + std::to_string(y) +
               " that has positive true probability");
    }
    k += truth[y] * std::log(truth[y] / model[y]);
  }
  return k < 0.0 ? 0.0 : k;
}

namespace {

void check_row(const std::vector<double>& row, std::size_t n,
               const std::string& where) {
  if (row.size() != n) {
    fail(ErrorCode::kSchema, where + ": row length differs from outcome count");
  }
  double s = 0.0;
  for (double q : row) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      fail(ErrorCode::kSchema, where + ": probabilities must be nonnegative");
    }
    s += q;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    fail(ErrorCode::kSchema, where + ": row does not sum to 1");
  }
}

void check_player_ref(int ref, std::size_t self, std::size_t n,
                      const std::string& name) {
  if (ref < 0 || static_cast<std::size_t>(ref) >= n) {
    fail(ErrorCode::kSchema, name + ": interaction references undefined player");
  }
  if (static_cast<std::size_t>(ref) == self) {
    fail(ErrorCode::kSchema, name + ": interaction may not reference own action");
  }
}

}  // namespace

Game::Game(GameSpec spec) : spec_(std::move(spec)) {
  const std::size_t n = spec_.players.size();
  if (n == 0) fail(ErrorCode::kSchema, "spec defines no players");
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pl = spec_.players[i];
    if (pl.actions.size() == 0) {
      fail(ErrorCode::kSchema, "player " + pl.name + " has no action grid");
    }
    if (pl.params.size() == 0) {
      fail(ErrorCode::kSchema, "player " + pl.name + " has no parameter grid");
    }
    sizes[i] = pl.actions.size();
  }
  space_ = ProfileSpace(sizes);

  cost_.resize(n);
  kl_.resize(n);
  payoff_.resize(n);
  logq_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pl = spec_.players[i];
    cost_[i].assign(pl.actions.size(), 0.0);
    if (pl.payoff.kind == PayoffSpec::Kind::kOutcomeMinusCost) {
      for (std::size_t x = 0; x < pl.actions.size(); ++x) {
        cost_[i][x] = pl.payoff.cost.value(pl.actions[x]);
      }
    }
    if (is_gaussian(i)) {
      const auto& m = gaussian(i);
      if (!(m.alpha > 0.0) || !(m.alpha_true >= 0.0) ||
          !std::isfinite(m.theta_true) || !std::isfinite(m.alpha) ||
          !std::isfinite(m.alpha_true)) {
        fail(ErrorCode::kSchema,
             pl.name + ": gaussian model needs alpha > 0, alpha_true >= 0");
      }
      if (pl.payoff.kind != PayoffSpec::Kind::kOutcomeMinusCost) {
        fail(ErrorCode::kSchema,
             pl.name + ": gaussian outcomes need an outcome_minus_cost payoff");
      }
      if (pl.actions.front() < 0.0) {
        fail(ErrorCode::kSchema, pl.name + ": gaussian actions must be >= 0");
      }
      const auto& g = m.interaction;
      if (g.kind == Interaction::Kind::kAction) {
        check_player_ref(g.of, i, n, pl.name);
      } else if (g.kind == Interaction::Kind::kClose) {
        check_player_ref(g.first, i, n, pl.name);
        check_player_ref(g.second, i, n, pl.name);
        if (!(g.threshold > 0.0)) {
          fail(ErrorCode::kSchema, pl.name + ": threshold must be positive");
        }
      }
    } else {
      build_tabular(i);
    }
  }
}

bool Game::all_gaussian() const {
  for (std::size_t i = 0; i < num_players(); ++i) {
    if (!is_gaussian(i)) return false;
  }
  return true;
}

std::size_t Game::num_outcomes(std::size_t i) const {
  return tabular(i).outcomes.size();
}

double Game::outcome_payoff(std::size_t i, std::size_t own_action,
                            std::size_t y) const {
  const auto& pl = spec_.players[i];
  if (pl.payoff.kind == PayoffSpec::Kind::kTable) {
    return pl.payoff.table[own_action][y];
  }
  return tabular(i).outcomes[y] - cost_[i][own_action];
}

void Game::build_tabular(std::size_t i) {
  const auto& pl = spec_.players[i];
  const auto& m = tabular(i);
  const std::size_t ny = m.outcomes.size();
  const ProfileIndex total = space_.total();
  if (ny == 0) fail(ErrorCode::kSchema, pl.name + ": no outcomes");
  if (m.truth.size() != total) {
    fail(ErrorCode::kSchema, pl.name + ": truth needs one row per profile");
  }
  if (m.family.size() != pl.params.size()) {
    fail(ErrorCode::kSchema,
         pl.name + ": model family needs one table per parameter point");
  }
  if (static_cast<double>(total) * static_cast<double>(pl.params.size()) > 5e7) {
    fail(ErrorCode::kSchema, pl.name + ": tabular game too large");
  }
  if (pl.payoff.kind == PayoffSpec::Kind::kTable) {
    if (pl.payoff.table.size() != pl.actions.size()) {
      fail(ErrorCode::kSchema, pl.name + ": payoff table needs one row per action");
    }
    for (const auto& row : pl.payoff.table) {
      if (row.size() != ny) {
        fail(ErrorCode::kSchema, pl.name + ": payoff row length differs from outcome count");
      }
    }
  }
  for (ProfileIndex p = 0; p < total; ++p) {
    check_row(m.truth[p], ny, pl.name + " truth");
  }
  const std::size_t nt = pl.params.size();
  kl_[i].assign(nt * total, 0.0);
  payoff_[i].assign(nt * total, 0.0);
  logq_[i].assign(nt * total * ny, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    if (m.family[j].size() != total) {
      fail(ErrorCode::kSchema, pl.name + ": family table needs one row per profile");
    }
    for (ProfileIndex p = 0; p < total; ++p) {
      const auto& row = m.family[j][p];
      check_row(row, ny, pl.name + " family");
      kl_[i][p * nt + j] = kl_finite(m.truth[p], row);
      const std::size_t own = space_.coord(p, i);
      double v = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        v += outcome_payoff(i, own, y) * row[y];
        logq_[i][(p * ny + y) * nt + j] =
            row[y] > 0.0 ? std::log(row[y])
                         : -std::numeric_limits<double>::infinity();
      }
      payoff_[i][p * nt + j] = v;
    }
  }
}

double Game::interaction(std::size_t i, ProfileIndex p) const {
  const auto& g = gaussian(i).interaction;
  switch (g.kind) {
    case Interaction::Kind::kOne:
      return 1.0;
    case Interaction::Kind::kAction:
      return action_value(g.of, space_.coord(p, g.of));
    case Interaction::Kind::kClose: {
      const double a = action_value(g.first, space_.coord(p, g.first));
      const double b = action_value(g.second, space_.coord(p, g.second));
      return std::abs(a - b) < g.threshold ? 1.0 : 0.0;
    }
  }
  return 1.0;
}

double Game::model_rate(std::size_t i, ProfileIndex p) const {
  return gaussian(i).alpha +
         action_value(i, space_.coord(p, i)) * interaction(i, p);
}

double Game::true_rate(std::size_t i, ProfileIndex p) const {
  return gaussian(i).alpha_true +
         action_value(i, space_.coord(p, i)) * interaction(i, p);
}

}  // namespace bnlab
