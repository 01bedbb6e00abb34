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

#ifndef BNLAB_ANALYTIC_HPP_
#define BNLAB_ANALYTIC_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bnlab/cost.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/game.hpp"

namespace bnlab {

// Single agent, outcome (alpha* + a) theta* + noise, fitted with a model
// that fixes ability at alpha and estimates theta.
struct EffortExample {
  double theta_true = 1.0;
  double alpha_true = 1.0;
  double alpha = 2.0;
  CostSpec cost = CostSpec::quadratic(1.0);

  enum class Regime { kOverconfident, kUnderconfident, kCorrect };
  Regime regime() const;
  void validate() const;
};

// Manager (player 0) and two workers. The manager's effort pays off only
// when the workers are within threshold of each other; worker output scales
// with the manager's effort.
struct TeamExample {
  double theta_true = 1.0;
  double alpha_true = 1.0;
  double alpha = 2.0;
  double threshold = 0.105;
  CostSpec cost = CostSpec::quadratic(1.0);

  void validate() const;
};

// Point-mass minimizer theta* + theta* (alpha* - alpha) / (alpha + a).
double effort_theta_m(const EffortExample& ex, double a);
// (c')^{-1}(effort_theta_m(a)).
double effort_T(const EffortExample& ex, double a);
// Upper action bound: (c')^{-1}(2 theta*).
double effort_abar(const EffortExample& ex);

struct EffortInterval {
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

// Limits of the interval iteration from [0, abar]: componentwise for the
// overconfident and correct cases, crossed for the underconfident case.
// Throws NotConverged after max_iter rounds.
EffortInterval effort_rationalizable_interval(const EffortExample& ex,
                                              double tol = 1e-12,
                                              int max_iter = 1000000);

// Roots of T(a) = a on [0, abar], by sign scan and bisection.
std::vector<double> effort_fixed_points(const EffortExample& ex,
                                        int scan_points = 20000,
                                        double tol = 1e-12);

// Bisection for a sign change of f on [lo, hi]. Throws NotConverged when f
// does not change sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12,
              int max_iter = 400) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    fail(ErrorCode::kNotConverged, "bisection bracket has no sign change");
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct TeamLimits {
  double m_inf = 0.0;
  double n_inf = 0.0;
  double k_star = 0.0;
  // |c'(M) - rhs| and |c'(N) - rhs| of the defining equations.
  double m_residual = 0.0;
  double n_residual = 0.0;
};

TeamLimits team_limits(const TeamExample& ex, double tol = 1e-12);

// Gap U(mu) - L(mu) between the largest and smallest worker response when
// the manager's mean effort is mu, on the box [0, M] x [0, N]^2.
double team_diff(const TeamExample& ex, double mu, double m_box, double n_box);

// (M*, N*) under correct specification. Throws NotCorrectlySpecified unless
// alpha == alpha*.
std::pair<double, double> team_csi_profile(const TeamExample& ex);

// Named instances.
EffortExample effort_over_quadratic();
EffortExample effort_over_multi();
EffortExample effort_under();
TeamExample team_misspecified();
TeamExample team_csi();

// Marginal cost curves used by the multi-equilibrium and 2-cycle
// instances, before tabulation.
double multi_marginal(double a);
double under_marginal(double a);

struct ExampleGrid {
  double action_step = 1e-3;
  std::size_t theta_points = 2001;
};

// Default grid per example name: action step 1e-3 for the effort examples,
// 1e-2 for the team examples.
ExampleGrid default_example_grid(const std::string& name);

GameSpec effort_spec(const EffortExample& ex, const ExampleGrid& grid,
                     const std::string& name = "effort");
GameSpec team_spec(const TeamExample& ex, const ExampleGrid& grid,
                   const std::string& name = "team");

// Names: effort-over, effort-over-quadratic, effort-under, team, team-csi.
// Throws UnknownExample.
GameSpec example_spec(const std::string& name, const ExampleGrid& grid);
std::vector<std::string> example_names();

struct PlotRow {
  std::string kind;  // "curve" or an annotation kind
  double a = 0.0;
  double theta_m = 0.0;
  double marginal_cost = 0.0;
  std::string label;
};

// Curves theta^m(delta_a) and c'(a) over [0, abar] plus annotation rows.
std::vector<PlotRow> effort_plot(const EffortExample& ex, int points = 401);
// Manager map curve plus M_inf, N_inf and k_star annotations.
std::vector<PlotRow> team_plot(const TeamExample& ex, int points = 401);

}  // namespace bnlab

#endif  // BNLAB_ANALYTIC_HPP_
