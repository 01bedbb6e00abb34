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


// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "bnlab/analytic.hpp"
#include "bnlab/bundle.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/learning.hpp"
#include "bnlab/mixed.hpp"
#include "bnlab/solver.hpp"
#include "bnlab/spec_io.hpp"
#include "test_util.hpp"

namespace {

using namespace bnlab;
using Clock = std::chrono::steady_clock;

// Tolerances.
constexpr double kIntervalTol = 2e-3;
constexpr double kSolveSeconds = 10.0;
constexpr double kCycleResidual = 1e-9;
constexpr double kLimitTol = 1e-6;
constexpr double kEquationResidual = 1e-10;
constexpr double kEffortPassRate = 0.90;
constexpr double kTeamPassRate = 0.90;
constexpr double kTeamEps = 0.05;
constexpr double kDecayAlpha = 0.01;
constexpr double kLogitTol = 1e-12;
constexpr double kAnnealTol = 1e-3;
constexpr double kIntendedTol = 0.05;
constexpr double kIntendedRate = 0.85;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [violated]");
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::vector<double> values(const Game& game, const SurvivorSet& s, std::size_t i) {
  std::vector<double> v;
  s.for_each([&](ProfileIndex p) { v.push_back(game.action_value(i, game.space().coord(p, i))); });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Hausdorff distance between a sorted finite set and the interval [lo, hi].
double hausdorff(const std::vector<double>& v, double lo, double hi) {
  double d = 0.0;
  for (double s : v) d = std::max({d, lo - s, s - hi});
  d = std::max({d, v.front() - lo, hi - v.back()});
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double a = std::max(v[k - 1], lo), b = std::min(v[k], hi);
    if (b > a) d = std::max(d, (b - a) / 2.0);
  }
  return d;
}

double root_bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

FixedPointResult solve(const Game& game, Operator op, SigmaSearchPolicy policy = {}) {
  IterateOptions o;
  o.op = op;
  return iterate_to_fixed(game, policy, 500, o);
}

SigmaSearchPolicy lp_policy() {
  SigmaSearchPolicy p;
  p.kind = SigmaSearchPolicy::Kind::kExactLP;
  return p;
}

Check criterion1() {
  Check c;
  const EffortExample ex = effort_over_quadratic();
  const double ts = ex.theta_true, as = ex.alpha_true, al = ex.alpha;
  const double root = root_bisect([&](double a) { return a * a + (al - ts) * a - ts * as; }, 0.0, 2.0);
  ExampleGrid grid;
  grid.action_step = 1e-3;
  const Game game(effort_spec(ex, grid));
  const auto t0 = Clock::now();
  const auto r = solve(game, Operator::kGamma);
  const double secs = seconds_since(t0);
  const double h = hausdorff(values(game, r.survivors, 0), root, root);
  c.require(r.converged, "converged");
  c.require(h <= kIntervalTol, "hausdorff " + num(h) + " to a*=" + num(root, 9) + " <= " + num(kIntervalTol));
  c.require(secs < kSolveSeconds, "runtime " + num(secs, 3) + " s < " + num(kSolveSeconds) + " s");
  return c;
}

Check criterion2() {
  Check c;
  const EffortExample ex = effort_under();
  auto T = [&](double a) {
    return ex.cost.inverse_marginal(ex.theta_true * (ex.alpha_true + a) / (ex.alpha + a));
  };
  const double abar = effort_abar(ex);
  // Outermost roots of T(T(a)) = a by scan and bisection.
  std::vector<double> roots;
  const int n = 100000;
  double prev = T(T(0.0)) - 0.0;
  for (int k = 1; k <= n; ++k) {
    const double a0 = abar * (k - 1) / n, a1 = abar * k / n;
    const double f = T(T(a1)) - a1;
    if ((f < 0.0) != (prev < 0.0)) roots.push_back(root_bisect([&](double a) { return T(T(a)) - a; }, a0, a1));
    prev = f;
  }
  c.require(roots.size() >= 3, num(static_cast<double>(roots.size())) + " roots of T^2(a)=a");
  if (roots.size() < 2) return c;
  const double lo = roots.front(), hi = roots.back();
  ExampleGrid grid;
  grid.action_step = 1e-3;
  const Game game(effort_spec(ex, grid));
  const auto r = solve(game, Operator::kGamma);
  const double h = hausdorff(values(game, r.survivors, 0), lo, hi);
  c.require(r.converged, "converged");
  c.require(h <= kIntervalTol, "hausdorff " + num(h) + " to [" + num(lo) + ", " + num(hi) + "] <= " + num(kIntervalTol));
  const EffortInterval iv = effort_rationalizable_interval(ex);
  const double r1 = std::abs(effort_T(ex, iv.lo) - iv.hi), r2 = std::abs(effort_T(ex, iv.hi) - iv.lo);
  c.require(std::max(r1, r2) < kCycleResidual, "cycle residuals " + num(r1, 3) + ", " + num(r2, 3) + " < 1e-9");
  return c;
}

Check criterion3() {
  Check c;
  const TeamExample ex = team_misspecified();
  const TeamLimits t = team_limits(ex);
  c.require(std::abs(t.m_inf - 0.618034) < kLimitTol, "M_inf " + num(t.m_inf, 9));
  c.require(std::abs(t.n_inf - 0.338261) < kLimitTol, "N_inf " + num(t.n_inf, 9));
  c.require(std::abs(t.k_star - 0.029244) < kLimitTol, "k* " + num(t.k_star, 9));
  c.require(std::max(t.m_residual, t.n_residual) < kEquationResidual,
            "residuals " + num(t.m_residual, 3) + ", " + num(t.n_residual, 3) + " < 1e-10");
  c.require(ex.threshold > t.k_star, "k=" + num(ex.threshold) + " > k*");
  const ExampleGrid grid = default_example_grid("team");
  const Game game(team_spec(ex, grid));
  SigmaSearchPolicy structured;
  structured.kind = SigmaSearchPolicy::Kind::kStructuredMoments;
  const auto t0 = Clock::now();
  const auto r = solve(game, Operator::kGamma, structured);
  const double secs = seconds_since(t0);
  const double target[3] = {t.m_inf, t.n_inf, t.n_inf};
  double far = 0.0;
  r.survivors.for_each([&](ProfileIndex p) {
    for (std::size_t i = 0; i < 3; ++i) {
      far = std::max(far, std::abs(game.action_value(i, game.space().coord(p, i)) - target[i]));
    }
  });
  c.require(r.converged, "converged in " + num(static_cast<double>(r.history.size())) + " rounds, " + num(secs, 3) + " s");
  c.require(far <= grid.action_step + 1e-12,
            num(static_cast<double>(r.survivors.count())) + " survivors within " + num(far, 3) + " of (M,N,N) <= step " +
                num(grid.action_step));
  bool mono = true;
  double prev = -1.0;
  for (int k = 0; k < 1000; ++k) {
    const double d = team_diff(ex, t.m_inf * k / 999.0, t.m_inf, t.n_inf);
    mono = mono && d >= prev;
    prev = d;
  }
  c.require(mono, "diff(mu) nondecreasing on 1000 points");
  return c;
}

Check criterion4() {
  Check c;
  std::mt19937_64 rng(2026);
  testing::RandomGameOptions opt;
  opt.csi = true;
  opt.max_actions = 4;
  int eq_bp = 0, eq_weak = 0;
  const int games = 50;
  for (int g = 0; g < games; ++g) {
    const Game game(testing::random_tabular_spec(rng, opt));
    const auto gam = solve(game, Operator::kGamma, lp_policy());
    const auto bp = solve(game, Operator::kBernheimPearce, lp_policy());
    const auto weak = solve(game, Operator::kWeak, lp_policy());
    eq_bp += gam.survivors == bp.survivors;
    eq_weak += weak.survivors == bp.survivors;
  }
  c.require(eq_bp == games, "gamma == bp on " + num(eq_bp) + "/" + num(games) + " CSI games");
  const Game team(team_spec(team_csi(), default_example_grid("team-csi")));
  const auto gam = solve(team, Operator::kGamma);
  const auto bp = solve(team, Operator::kBernheimPearce);
  const auto weak = solve(team, Operator::kWeak);
  std::vector<std::vector<std::size_t>> box(3);
  const auto [mstar, nstar] = team_csi_profile(team_csi());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t x = 0; x < team.actions(i).size(); ++x) {
      if (team.action_value(i, x) <= 1.0 + 1e-12) box[i].push_back(x);
    }
  }
  bool singleton = gam.survivors.count() == 1;
  if (singleton) {
    const auto cd = team.space().decode(gam.survivors.members()[0]);
    singleton = std::abs(team.action_value(0, cd[0]) - mstar) < 1e-12 &&
                std::abs(team.action_value(1, cd[1]) - nstar) < 1e-12 &&
                std::abs(team.action_value(2, cd[2]) - nstar) < 1e-12;
  }
  c.require(team_csi().threshold < nstar, "team CSI k=" + num(team_csi().threshold) + " < N*=" + num(nstar));
  c.require(singleton, "team CSI gamma = {(M*,N*,N*)}");
  c.require(bp.survivors == SurvivorSet::product(team.space(), box),
            "team CSI bp = full box (" + num(static_cast<double>(bp.survivors.count())) + " profiles)");
  eq_weak += weak.survivors == bp.survivors;
  c.require(eq_weak == games + 1, "weak == bp on " + num(eq_weak) + "/" + num(games + 1) + " CSI games");
  return c;
}

Check criterion5() {
  Check c;
  std::mt19937_64 rng(5);
  const auto lp = lp_policy();
  int nested = 0, monotone = 0, mono_trials = 0, bne_ok = 0, bne_total = 0, phi_ok = 0, phi_total = 0;
  int replay_ok = 0, replay_total = 0;
  const int games = 200;
  for (int g = 0; g < games; ++g) {
    testing::RandomGameOptions opt;
    opt.players = g % 4 == 3 ? 3 : 2;
    opt.max_actions = opt.players == 3 ? 3 : 4;
    const Game game(testing::random_tabular_spec(rng, opt));
    const auto& sp = game.space();
    bool nest = true;
    SurvivorSet b = SurvivorSet::full(sp);
    for (int k = 0; k < 100; ++k) {
      SurvivorSet next = gamma_apply(game, b, lp);
      next &= b;
      nest = nest && next.subset_of(b);
      if (next == b) break;
      b = std::move(next);
    }
    nested += nest;
    const auto r = solve(game, Operator::kGamma, lp);
    nest = nest && r.survivors == b;
    for (int t = 0; t < 3; ++t) {
      SurvivorSet small(sp), big(sp);
      for (ProfileIndex p = 0; p < sp.total(); ++p) {
        const auto u = rng() % 4;
        if (u == 0) small.insert(p);
        if (u <= 1) big.insert(p);
      }
      if (small.empty()) continue;
      ++mono_trials;
      monotone += gamma_apply(game, small, lp).subset_of(gamma_apply(game, big, lp));
    }
    for (ProfileIndex p = 0; p < sp.total(); ++p) {
      if (bne_check(game, p)) {
        ++bne_total;
        bne_ok += r.survivors.contains(p);
      }
    }
    for (int t = 0; t < 3; ++t) {
      ProfileMixture m;
      for (std::size_t j = 0; j < 1 + rng() % 3; ++j) m.support.push_back(rng() % sp.total());
      std::sort(m.support.begin(), m.support.end());
      m.support.erase(std::unique(m.support.begin(), m.support.end()), m.support.end());
      m.weights = testing::random_distribution(rng, m.support.size(), 0.01);
      bool inside = true;
      for (ProfileIndex p : m.support) inside = inside && r.survivors.contains(p);
      ++phi_total;
      phi_ok += phi_apply(game, m, r.survivors, lp) == inside;
    }
    for (const auto& w : r.profile_witnesses) {
      ++replay_total;
      const Certificate cert = certify(game, w.profile, w.sigma);
      replay_ok += cert.ok && cert == w.certificate;
    }
  }
  c.require(nested == games, "nested iterates " + num(nested) + "/" + num(games));
  c.require(monotone == mono_trials, "monotone " + num(monotone) + "/" + num(mono_trials));
  c.require(bne_ok == bne_total, "BNE in fixed set " + num(bne_ok) + "/" + num(bne_total));
  c.require(phi_ok == phi_total, "phi iff support in fixed set " + num(phi_ok) + "/" + num(phi_total));
  c.require(replay_ok == replay_total, "witness replay " + num(replay_ok) + "/" + num(replay_total));
  return c;
}

Check criterion6() {
  Check c;
  {
    const GameSpec spec = effort_spec(effort_over_quadratic(), ExampleGrid{});
    const Game game(spec);
    const auto fp = solve(game, Operator::kGamma);
    RunConfig cfg = RunConfig::from(spec.simulation);
    cfg.replications = 100;
    cfg.horizon = 50000;
    cfg.eps = 0.02;
    const auto rep = containment_report(game, run_replications(game, cfg), fp.survivors, cfg.eps, cfg.window);
    c.require(rep.pass_rate >= kEffortPassRate,
              "effort containment " + num(rep.pass_rate) + " >= " + num(kEffortPassRate));
  }
  {
    const TeamExample ex = team_misspecified();
    const TeamLimits t = team_limits(ex);
    const GameSpec spec = team_spec(ex, default_example_grid("team"));
    const Game game(spec);
    RunConfig cfg = RunConfig::from(spec.simulation);
    cfg.replications = 50;
    cfg.horizon = 100000;
    const auto traces = run_replications(game, cfg);
    const double target[3] = {t.m_inf, t.n_inf, t.n_inf};
    int hits = 0;
    for (const auto& tr : traces) {
      double far = 0.0;
      for (ProfileIndex p : limit_points(tr, cfg.window)) {
        for (std::size_t i = 0; i < 3; ++i) {
          far = std::max(far, std::abs(game.action_value(i, game.space().coord(p, i)) - target[i]));
        }
      }
      hits += far <= kTeamEps;
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(traces.size());
    c.require(rate >= kTeamPassRate, "team within " + num(kTeamEps) + " of (M,N,N) in " + num(rate) + " of seeds");
  }
  {
    const Game game(effort_spec(effort_over_quadratic(), ExampleGrid{}));
    const ProfileIndex p = game.actions(0).nearest(1.0);
    const DecayRun run = fixed_action_run(game, 0, p, 20000, 0.02, 200, 7, 0);
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
    const double tstat = slope / std::sqrt(sse / (n - 2.0) / sxx);
    const double pval = boost::math::cdf(boost::math::students_t(n - 2.0), tstat);
    c.require(slope < 0.0 && pval < kDecayAlpha,
              "posterior decay slope " + num(slope, 3) + ", p " + num(pval, 3) + " < " + num(kDecayAlpha));
  }
  return c;
}

// Misspecified matching-pennies game: the model family misses the truth but
// one member is closest at every profile.
GameSpec pennies_spec() {
  GameSpec spec;
  spec.name = "pennies";
  const ProfileSpace sp({2, 2});
  for (std::size_t i = 0; i < 2; ++i) {
    PlayerSpec p;
    p.name = i == 0 ? "matcher" : "mismatcher";
    p.actions = Grid::uniform(0.0, 1.0, 2);
    p.params = Grid::uniform(0.0, 1.0, 2);
    TabularModel t;
    t.outcomes = {0.0, 1.0};
    t.family.resize(2);
    for (ProfileIndex q = 0; q < sp.total(); ++q) {
      const bool match = sp.coord(q, 0) == sp.coord(q, 1);
      const bool win = i == 0 ? match : !match;
      const double good = win ? 0.8 : 0.2;
      const double fit = win ? 0.75 : 0.25;
      t.truth.push_back({1.0 - good, good});
      t.family[0].push_back({1.0 - fit, fit});
      t.family[1].push_back({0.5, 0.5});
    }
    p.model = t;
    p.payoff.kind = PayoffSpec::Kind::kTable;
    p.payoff.table = {{0.0, 1.0}, {0.1 * static_cast<double>(i), 1.0 + 0.1 * static_cast<double>(i)}};
    spec.players.push_back(p);
  }
  return spec;
}

// Strict-equilibrium game: action 1 is dominant for both players.
GameSpec strict_spec() {
  GameSpec spec = pennies_spec();
  const ProfileSpace sp({2, 2});
  for (std::size_t i = 0; i < 2; ++i) {
    auto& t = std::get<TabularModel>(spec.players[i].model);
    for (ProfileIndex q = 0; q < sp.total(); ++q) {
      const double own = static_cast<double>(sp.coord(q, i));
      t.truth[q] = {0.7 - 0.4 * own, 0.3 + 0.4 * own};
      t.family[0][q] = t.truth[q];
    }
    spec.players[i].payoff.table = {{0.0, 1.0}, {0.2, 1.2}};
  }
  return spec;
}

Check criterion7() {
  Check c;
  double worst = 0.0;
  for (double u0 : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
    for (double u1 : {-1.0, 0.0, 0.25, 2.0}) {
      const auto p = logit_probabilities({u0, u1}, 1.0);
      worst = std::max(worst, std::abs(p[1] - 1.0 / (1.0 + std::exp(u0 - u1))));
      worst = std::max(worst, std::abs(p[0] - 1.0 / (1.0 + std::exp(u1 - u0))));
    }
  }
  c.require(worst < kLogitTol, "two-action logit error " + num(worst, 3) + " < 1e-12");
  {
    const Game game(strict_spec());
    const auto r = anneal(game, simplex_mesh_cloud(game, 11), {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}, 200, 1e-10);
    const MixedProfile target = MixedProfile::pure(game, game.space().encode({1, 1}));
    double far = 0.0;
    for (const auto& m : r.cloud) far = std::max(far, mixed_distance(m, target));
    c.require(bne_check(game, game.space().encode({1, 1})), "strict BNE (1,1)");
    c.require(far < kAnnealTol, "annealed cloud within " + num(far, 3) + " of the BNE at lambda=1e-3");
  }
  {
    const Game game(pennies_spec());
    const LogitPerturbation perturb{0.5};
    const auto fixed = iterate_mixed(game, simplex_mesh_cloud(game, 11), perturb, 2000, 1e-12);
    const MixedProfileCloud cloud = dedupe(fixed.cloud, 1e-6);
    c.require(fixed.converged, "phi_M cloud converged to " + num(static_cast<double>(cloud.size())) + " point(s)");
    RunConfig cfg;
    cfg.horizon = 50000;
    cfg.replications = 50;
    cfg.seed = 314;
    cfg.logit = perturb;
    int hits = 0;
    for (const auto& tr : run_replications(game, cfg)) hits += distance_to_cloud(*tr.final_intended, cloud) <= kIntendedTol;
    const double rate = hits / 50.0;
    c.require(rate >= kIntendedRate, "intended strategies within " + num(kIntendedTol) + " of the cloud in " + num(rate) +
                                         " of seeds >= " + num(kIntendedRate));
  }
  return c;
}

Check criterion8() {
  Check c;
  const GameSpec spec = effort_spec(effort_under(), ExampleGrid{});
  const Game game(spec);
  RunConfig cfg;
  cfg.horizon = 5000;
  cfg.replications = 4;
  cfg.seed = 11;
  setenv("BNLAB_THREADS", "1", 1);
  const auto a = run_replications(game, cfg);
  const auto sa = solve(game, Operator::kGamma);
  setenv("BNLAB_THREADS", "4", 1);
  const auto b = run_replications(game, cfg);
  const auto sb = solve(game, Operator::kGamma);
  unsetenv("BNLAB_THREADS");
  bool same = a.size() == b.size();
  for (std::size_t r = 0; same && r < a.size(); ++r) {
    same = a[r].profiles == b[r].profiles && a[r].outcomes == b[r].outcomes &&
           a[r].posterior_means == b[r].posterior_means;
  }
  c.require(same, "identical traces across runs");
  c.require(sa.survivors.words() == sb.survivors.words(), "identical survivor bitmasks");
  int lossless = 0, total = 0;
  std::vector<GameSpec> specs;
  for (const auto& name : example_names()) specs.push_back(example_spec(name, default_example_grid(name)));
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) specs.push_back(testing::random_tabular_spec(rng));
  for (const auto& s : specs) {
    ++total;
    const GameSpec back = parse_spec(emit_spec(s));
    lossless += back == s && emit_spec(back) == emit_spec(s);
  }
  c.require(lossless == total, "spec round-trip " + num(lossless) + "/" + num(total));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::function<Check()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  const auto t0 = Clock::now();
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t1 = Clock::now();
    Check c;
    try {
      c = criteria[k]();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += !c.ok;
    std::printf("%s criterion %zu (%.1f s): %s\n", c.ok ? "PASS" : "FAIL", k + 1, seconds_since(t1), c.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("total %.1f s\n", seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
