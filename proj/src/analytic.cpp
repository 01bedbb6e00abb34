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

#include "bnlab/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace bnlab {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
  }
}

CostSpec tabulate(double (*mc)(double), double hi, double step) {
  const std::size_t n = static_cast<std::size_t>(std::llround(hi / step)) + 1;
  std::vector<double> knots(n), vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    knots[k] = k + 1 == n ? hi : hi * static_cast<double>(k) / static_cast<double>(n - 1);
    vals[k] = mc(knots[k]);
  }
  vals[0] = 0.0;
  return CostSpec::tabulated(std::move(knots), std::move(vals));
}

// Smallest grid multiple of step at or above x.
double round_up(double x, double step) {
  return std::ceil(x / step - 1e-9) * step;
}

Grid action_grid(double abar, double step) {
  const std::size_t n = static_cast<std::size_t>(std::llround(round_up(abar, step) / step)) + 1;
  return Grid::uniform(0.0, static_cast<double>(n - 1) * step, n);
}

}  // namespace

EffortExample::Regime EffortExample::regime() const {
  if (alpha > alpha_true) return Regime::kOverconfident;
  if (alpha < alpha_true) return Regime::kUnderconfident;
  return Regime::kCorrect;
}

void EffortExample::validate() const {
  check_positive(theta_true, "theta*");
  check_positive(alpha, "alpha");
  if (!(alpha_true >= 0.0)) fail(ErrorCode::kInvalidArgument, "alpha* must be nonnegative");
  if (cost.marginal(0.0) != 0.0) fail(ErrorCode::kInvalidArgument, "c'(0) must be 0");
}

void TeamExample::validate() const {
  check_positive(theta_true, "theta*");
  check_positive(alpha, "alpha");
  check_positive(threshold, "threshold");
  if (!(alpha_true >= 0.0)) fail(ErrorCode::kInvalidArgument, "alpha* must be nonnegative");
}

double effort_theta_m(const EffortExample& ex, double a) {
  return ex.theta_true + ex.theta_true * (ex.alpha_true - ex.alpha) / (ex.alpha + a);
}

double effort_T(const EffortExample& ex, double a) {
  return ex.cost.inverse_marginal(effort_theta_m(ex, a));
}

double effort_abar(const EffortExample& ex) {
  return ex.cost.inverse_marginal(2.0 * ex.theta_true);
}

EffortInterval effort_rationalizable_interval(const EffortExample& ex,
                                              double tol, int max_iter) {
  ex.validate();
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  EffortInterval out;
  if (ex.regime() == EffortExample::Regime::kCorrect) {
    out.lo = out.hi = ex.cost.inverse_marginal(ex.theta_true);
    return out;
  }
  const bool crossed = ex.regime() == EffortExample::Regime::kUnderconfident;
  double lo = 0.0;
  double hi = effort_abar(ex);
  for (int it = 1; it <= max_iter; ++it) {
    const double tlo = effort_T(ex, lo);
    const double thi = effort_T(ex, hi);
    const double nlo = crossed ? thi : tlo;
    const double nhi = crossed ? tlo : thi;
    const double change = std::max(std::abs(nlo - lo), std::abs(nhi - hi));
    lo = nlo;
    hi = nhi;
    if (change <= tol) {
      out.lo = lo;
      out.hi = hi;
      out.iterations = it;
      return out;
    }
  }
  fail(ErrorCode::kNotConverged, "interval iteration did not converge");
}

std::vector<double> effort_fixed_points(const EffortExample& ex,
                                        int scan_points, double tol) {
  ex.validate();
  const double abar = effort_abar(ex);
  auto g = [&](double a) { return effort_T(ex, a) - a; };
  std::vector<double> roots;
  double prev_a = 0.0;
  double prev = g(0.0);
  for (int k = 1; k <= scan_points; ++k) {
    const double a = abar * k / scan_points;
    const double v = g(a);
    if (prev == 0.0) {
      roots.push_back(prev_a);
    } else if ((prev < 0.0) != (v < 0.0) && v != 0.0) {
      roots.push_back(bisect(g, prev_a, a, tol));
    }
    prev_a = a;
    prev = v;
  }
  if (prev == 0.0) roots.push_back(prev_a);
  return roots;
}

TeamLimits team_limits(const TeamExample& ex, double tol) {
  ex.validate();
  const CostSpec& c = ex.cost;
  const double ts = ex.theta_true, as = ex.alpha_true, al = ex.alpha;
  TeamLimits out;
  auto m_rhs = [&](double m) { return ts * (as + m) / (al + m); };
  const double bound = c.inverse_marginal(2.0 * ts * std::max(1.0, as / al));
  if (ex.alpha == ex.alpha_true) {
    out.m_inf = c.inverse_marginal(ts);
  } else {
    out.m_inf = bisect([&](double m) { return c.marginal(m) - m_rhs(m); }, 0.0, bound, tol);
  }
  const double m = out.m_inf;
  auto n_rhs = [&](double n) { return ts * m * (as + m * n) / (al + m * n); };
  const double nbound = c.inverse_marginal(2.0 * ts * std::max(1.0, as / al) * std::max(m, 1.0));
  if (ex.alpha == ex.alpha_true) {
    out.n_inf = c.inverse_marginal(ts * m);
  } else {
    out.n_inf = bisect([&](double n) { return c.marginal(n) - n_rhs(n); }, 0.0, nbound, tol);
  }
  out.m_residual = std::abs(c.marginal(out.m_inf) - m_rhs(out.m_inf));
  out.n_residual = std::abs(c.marginal(out.n_inf) - n_rhs(out.n_inf));
  out.k_star = out.n_inf - c.inverse_marginal(m * ts * as / al);
  return out;
}

double team_diff(const TeamExample& ex, double mu, double m_box, double n_box) {
  const double ts = ex.theta_true, as = ex.alpha_true, al = ex.alpha;
  const double num = al * as + (al + as) * n_box * mu + n_box * n_box * mu * m_box;
  const double den = al * al + 2.0 * al * n_box * mu + n_box * n_box * mu * m_box;
  const double upper = ex.cost.inverse_marginal(mu * ts * num / den);
  const double lower = ex.cost.inverse_marginal(mu * ts * as / al);
  return upper - lower;
}

std::pair<double, double> team_csi_profile(const TeamExample& ex) {
  ex.validate();
  if (ex.alpha != ex.alpha_true) {
    fail(ErrorCode::kNotCorrectlySpecified, "team profile needs alpha == alpha*");
  }
  const double m = ex.cost.inverse_marginal(ex.theta_true);
  return {m, ex.cost.inverse_marginal(ex.theta_true * m)};
}

double multi_marginal(double a) {
  auto raw = [](double x) {
    return 0.45 / (1.0 + std::exp(-25.0 * (x - 0.2))) + std::log1p(std::exp(5.0 * (x - 1.5))) / 5.0;
  };
  return raw(a) - raw(0.0);
}

double under_marginal(double a) {
  auto raw = [](double x) {
    return 1.5 * (1.0 - std::exp(-10.0 * x)) + 0.5 * std::log1p(std::exp(10.0 * (x - 1.0)));
  };
  return raw(a) - raw(0.0);
}

EffortExample effort_over_quadratic() {
  EffortExample ex;
  ex.alpha = 2.0;
  return ex;
}

EffortExample effort_over_multi() {
  EffortExample ex;
  ex.alpha = 3.0;
  ex.cost = tabulate(&multi_marginal, 4.0, 1e-3);
  return ex;
}

EffortExample effort_under() {
  EffortExample ex;
  ex.alpha = 0.5;
  ex.cost = tabulate(&under_marginal, 2.0, 1e-3);
  return ex;
}

TeamExample team_misspecified() { return TeamExample{}; }

TeamExample team_csi() {
  TeamExample ex;
  ex.alpha = ex.alpha_true;
  return ex;
}

ExampleGrid default_example_grid(const std::string& name) {
  if (name.rfind("team", 0) == 0) return ExampleGrid{1e-2, 401};
  return ExampleGrid{};
}

GameSpec effort_spec(const EffortExample& ex, const ExampleGrid& grid,
                     const std::string& name) {
  ex.validate();
  GameSpec spec;
  spec.name = name;
  PlayerSpec p;
  p.name = "agent";
  p.actions = action_grid(effort_abar(ex), grid.action_step);
  p.params = Grid::uniform(0.0, 2.0 * ex.theta_true, grid.theta_points);
  GaussianLinearModel m;
  m.alpha = ex.alpha;
  m.alpha_true = ex.alpha_true;
  m.theta_true = ex.theta_true;
  p.model = m;
  p.payoff.kind = PayoffSpec::Kind::kOutcomeMinusCost;
  p.payoff.cost = ex.cost;
  spec.players.push_back(std::move(p));
  spec.simulation.horizon = 50000;
  spec.simulation.replications = 100;
  spec.simulation.eps = 0.02;
  return spec;
}

GameSpec team_spec(const TeamExample& ex, const ExampleGrid& grid,
                   const std::string& name) {
  ex.validate();
  GameSpec spec;
  spec.name = name;
  const double abar = ex.cost.inverse_marginal(2.0 * ex.theta_true);
  const Grid actions = action_grid(abar, grid.action_step);
  const Grid params = Grid::uniform(0.0, 2.0 * ex.theta_true, grid.theta_points);
  for (int i = 0; i < 3; ++i) {
    PlayerSpec p;
    p.name = i == 0 ? "manager" : (i == 1 ? "worker1" : "worker2");
    p.actions = actions;
    p.params = params;
    GaussianLinearModel m;
    m.alpha = ex.alpha;
    m.alpha_true = ex.alpha_true;
    m.theta_true = ex.theta_true;
    if (i == 0) {
      m.interaction.kind = Interaction::Kind::kClose;
      m.interaction.first = 1;
      m.interaction.second = 2;
      m.interaction.threshold = ex.threshold;
    } else {
      m.interaction.kind = Interaction::Kind::kAction;
      m.interaction.of = 0;
    }
    p.model = m;
    p.payoff.kind = PayoffSpec::Kind::kOutcomeMinusCost;
    p.payoff.cost = ex.cost;
    spec.players.push_back(std::move(p));
  }
  spec.simulation.horizon = 100000;
  spec.simulation.replications = 50;
  spec.simulation.eps = 0.05;
  return spec;
}

std::vector<std::string> example_names() {
  return {"effort-over", "effort-over-quadratic", "effort-under", "team", "team-csi"};
}

GameSpec example_spec(const std::string& name, const ExampleGrid& grid) {
  if (name == "effort-over") return effort_spec(effort_over_multi(), grid, name);
  if (name == "effort-over-quadratic") return effort_spec(effort_over_quadratic(), grid, name);
  if (name == "effort-under") return effort_spec(effort_under(), grid, name);
  if (name == "team") return team_spec(team_misspecified(), grid, name);
  if (name == "team-csi") return team_spec(team_csi(), grid, name);
  fail(ErrorCode::kUnknownExample, "unknown example '" + name + "'");
}

std::vector<PlotRow> effort_plot(const EffortExample& ex, int points) {
  ex.validate();
  if (points < 2) fail(ErrorCode::kInvalidArgument, "plot needs >= 2 points");
  const double abar = effort_abar(ex);
  std::vector<PlotRow> rows;
  auto row = [&](const std::string& kind, double a, const std::string& label) {
    rows.push_back({kind, a, effort_theta_m(ex, a), ex.cost.marginal(a), label});
  };
  for (int k = 0; k < points; ++k) row("curve", abar * k / (points - 1), "");
  const auto fps = effort_fixed_points(ex);
  if (fps.size() == 3) {
    row("equilibrium", fps[0], "a_S");
    row("equilibrium", fps[1], "a_M");
    row("equilibrium", fps[2], "a_L");
  } else {
    for (std::size_t k = 0; k < fps.size(); ++k) {
      row("equilibrium", fps[k], fps.size() == 1 ? "a_eq" : "a_eq" + std::to_string(k + 1));
    }
  }
  const EffortInterval iv = effort_rationalizable_interval(ex);
  if (ex.regime() == EffortExample::Regime::kUnderconfident) {
    row("cycle", iv.lo, "a_min_inf");
    row("cycle", iv.hi, "a_max_inf");
  } else {
    row("interval", iv.lo, "lo");
    row("interval", iv.hi, "hi");
  }
  return rows;
}

std::vector<PlotRow> team_plot(const TeamExample& ex, int points) {
  ex.validate();
  if (points < 2) fail(ErrorCode::kInvalidArgument, "plot needs >= 2 points");
  const double abar = ex.cost.inverse_marginal(2.0 * ex.theta_true);
  std::vector<PlotRow> rows;
  auto theta_m = [&](double a) {
    return ex.theta_true * (ex.alpha_true + a) / (ex.alpha + a);
  };
  for (int k = 0; k < points; ++k) {
    const double a = abar * k / (points - 1);
    rows.push_back({"curve", a, theta_m(a), ex.cost.marginal(a), ""});
  }
  const TeamLimits lim = team_limits(ex);
  rows.push_back({"limit", lim.m_inf, theta_m(lim.m_inf), ex.cost.marginal(lim.m_inf), "M_inf"});
  rows.push_back({"limit", lim.n_inf, 0.0, ex.cost.marginal(lim.n_inf), "N_inf"});
  rows.push_back({"threshold", lim.k_star, 0.0, 0.0, "k_star"});
  return rows;
}

}  // namespace bnlab
