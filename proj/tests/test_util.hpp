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


#ifndef BNLAB_TESTS_TEST_UTIL_HPP_
#define BNLAB_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bnlab/game.hpp"

namespace bnlab::testing {

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n,
                                               double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = u(rng));
  for (auto& x : v) x /= s;
  return v;
}

struct RandomGameOptions {
  std::size_t players = 2;
  std::size_t min_actions = 2;
  std::size_t max_actions = 4;
  std::size_t max_params = 3;
  std::size_t max_outcomes = 3;
  // Truth equals one family member and the family is generic, so the
  // game is correctly specified and strongly identified.
  bool csi = false;
};

// Random finite game with tabular consequence models and table payoffs.
inline GameSpec random_tabular_spec(std::mt19937_64& rng, const RandomGameOptions& o = {}) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> pay(-1.0, 1.0);
  GameSpec spec;
  spec.name = "random";
  std::vector<std::size_t> sizes(o.players);
  std::size_t total = 1;
  for (auto& k : sizes) total *= (k = pick(o.min_actions, o.max_actions));
  for (std::size_t i = 0; i < o.players; ++i) {
    PlayerSpec p;
    p.name = "p" + std::to_string(i);
    p.actions = Grid::uniform(0.0, static_cast<double>(sizes[i] - 1), sizes[i]);
    const std::size_t m = pick(o.csi ? 2 : 1, o.max_params);
    p.params = m == 1 ? Grid::uniform(0.0, 0.0, 1) : Grid::uniform(0.0, static_cast<double>(m - 1), m);
    const std::size_t ny = pick(2, o.max_outcomes);
    TabularModel t;
    for (std::size_t y = 0; y < ny; ++y) t.outcomes.push_back(static_cast<double>(y));
    t.family.resize(m);
    for (auto& fam : t.family) {
      for (std::size_t q = 0; q < total; ++q) fam.push_back(random_distribution(rng, ny));
    }
    if (o.csi) {
      t.truth = t.family[pick(0, m - 1)];
    } else {
      for (std::size_t q = 0; q < total; ++q) t.truth.push_back(random_distribution(rng, ny));
    }
    p.model = t;
    p.payoff.kind = PayoffSpec::Kind::kTable;
    p.payoff.table.assign(sizes[i], std::vector<double>(ny));
    for (auto& row : p.payoff.table) {
      for (auto& v : row) v = pay(rng);
    }
    spec.players.push_back(std::move(p));
  }
  spec.solver.policy = "exact_lp";
  return spec;
}

}  // namespace bnlab::testing

#endif  // BNLAB_TESTS_TEST_UTIL_HPP_
