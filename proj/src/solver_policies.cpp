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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bnlab/errors.hpp"
#include "bnlab/lp.hpp"
#include "bnlab/model_core.hpp"
#include "bnlab/parallel.hpp"
#include "solver_internal.hpp"

namespace bnlab::detail {

namespace {

constexpr std::size_t kBatch = 2048;
constexpr double kMaxGridSigmas = 2e7;
constexpr std::size_t kMaxLpProfiles = 4096;

}  // namespace

Evaluator::Evaluator(const Game& game, double tol) : game_(game), tol_(tol) {
  if (game.all_gaussian()) fast_ = std::make_unique<GaussianFast>(game, tol);
}

void Evaluator::justified(std::size_t i, const ProfileMixture& sigma,
                          std::vector<std::size_t>& out) const {
  if (fast_) {
    fast_->justified(i, sigma, out);
    return;
  }
  out.clear();
  for (const auto& ja : justified_actions(game_, sigma, i, tol_)) out.push_back(ja.action);
}

void Evaluator::justified_point(std::size_t i, ProfileIndex p,
                                std::vector<std::size_t>& out) const {
  if (fast_) {
    fast_->justified_point(i, p, out);
    return;
  }
  justified(i, ProfileMixture::point(p), out);
}

Collector::Collector(const Game& game, Mode mode, const ApplyOptions& opts)
    : game_(game), mode_(mode), opts_(opts), profiles_(game.space()) {
  const std::size_t n = game.num_players();
  actions_.resize(n);
  action_witness_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    actions_[i].assign(game.actions(i).size(), 0);
    action_witness_[i].assign(game.actions(i).size(), 0);
  }
  pos_.resize(n);
}

std::uint32_t Collector::sigma_index(const ProfileMixture* sigma,
                                     ProfileIndex point, std::int64_t& cached) {
  if (cached < 0) {
    cached = static_cast<std::int64_t>(sigmas_.size());
    sigmas_.push_back(sigma ? *sigma : ProfileMixture::point(point));
  }
  return static_cast<std::uint32_t>(cached);
}

void Collector::add(const ProfileMixture* sigma, ProfileIndex point,
                    const std::vector<std::vector<std::size_t>>& justified) {
  const std::size_t n = justified.size();
  std::int64_t cached = -1;
  if (mode_ == Mode::kPlayer) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t x : justified[i]) {
        if (actions_[i][x]) continue;
        actions_[i][x] = 1;
        if (opts_.record_witnesses) action_witness_[i][x] = sigma_index(sigma, point, cached);
      }
    }
    return;
  }
  for (const auto& j : justified) {
    if (j.empty()) return;
  }
  const ProfileSpace& space = game_.space();
  std::fill(pos_.begin(), pos_.end(), 0);
  while (true) {
    ProfileIndex p = 0;
    for (std::size_t i = 0; i < n; ++i) p += justified[i][pos_[i]] * space.stride(i);
    if (!profiles_.contains(p) && (!opts_.restrict_to || opts_.restrict_to->contains(p))) {
      profiles_.insert(p);
      if (opts_.record_witnesses) {
        profile_witness_.emplace_back(p, sigma_index(sigma, point, cached));
      }
    }
    std::size_t i = n;
    while (i-- > 0) {
      if (++pos_[i] < justified[i].size()) break;
      pos_[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
}

void Collector::mark_profile(ProfileIndex p, const ProfileMixture& sigma) {
  if (profiles_.contains(p)) return;
  if (opts_.restrict_to && !opts_.restrict_to->contains(p)) return;
  profiles_.insert(p);
  if (opts_.record_witnesses) {
    profile_witness_.emplace_back(p, static_cast<std::uint32_t>(sigmas_.size()));
    sigmas_.push_back(sigma);
  }
}

void Collector::mark_action(std::size_t i, std::size_t x,
                            const ProfileMixture& sigma) {
  if (actions_[i][x]) return;
  actions_[i][x] = 1;
  if (opts_.record_witnesses) {
    action_witness_[i][x] = static_cast<std::uint32_t>(sigmas_.size());
    sigmas_.push_back(sigma);
  }
}

ApplyResult Collector::take_profiles() {
  ApplyResult r;
  r.survivors = std::move(profiles_);
  std::sort(profile_witness_.begin(), profile_witness_.end());
  r.witness_of = std::move(profile_witness_);
  r.sigmas = std::move(sigmas_);
  return r;
}

PlayerJustification Collector::take_actions() {
  PlayerJustification r;
  const std::size_t n = actions_.size();
  r.actions.resize(n);
  r.witness.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < actions_[i].size(); ++x) {
      if (!actions_[i][x]) continue;
      r.actions[i].push_back(x);
      if (opts_.record_witnesses) r.witness[i].push_back(action_witness_[i][x]);
    }
  }
  r.sigmas = std::move(sigmas_);
  return r;
}

namespace {

using Justified = std::vector<std::vector<std::size_t>>;

// Evaluates sigmas in parallel batches and feeds them to the collector in
// stream order, so results do not depend on the worker count.
class Runner {
 public:
  Runner(const Evaluator& ev, Collector& out) : ev_(ev), out_(out) {}
  ~Runner() = default;

  void push(ProfileMixture sigma) {
    batch_.push_back(std::move(sigma));
    if (batch_.size() >= kBatch) flush();
  }

  void flush() {
    const std::size_t n = ev_.game().num_players();
    ensure(batch_.size(), n);
    parallel_for(batch_.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        for (std::size_t i = 0; i < n; ++i) ev_.justified(i, batch_[k], results_[k][i]);
      }
    });
    for (std::size_t k = 0; k < batch_.size(); ++k) out_.add(&batch_[k], 0, results_[k]);
    batch_.clear();
  }

  void point_masses(const std::vector<ProfileIndex>& members) {
    const std::size_t n = ev_.game().num_players();
    for (std::size_t start = 0; start < members.size(); start += kBatch) {
      const std::size_t len = std::min(kBatch, members.size() - start);
      ensure(len, n);
      parallel_for(len, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            ev_.justified_point(i, members[start + k], results_[k][i]);
          }
        }
      });
      for (std::size_t k = 0; k < len; ++k) out_.add(nullptr, members[start + k], results_[k]);
    }
  }

 private:
  void ensure(std::size_t len, std::size_t n) {
    if (results_.size() < len) results_.resize(len);
    for (std::size_t k = 0; k < len; ++k) results_[k].resize(n);
  }

  const Evaluator& ev_;
  Collector& out_;
  std::vector<ProfileMixture> batch_;
  std::vector<Justified> results_;
};

double binomial(double n, double k) {
  double r = 1.0;
  for (double j = 0; j < k; ++j) r = r * (n - j) / (j + 1.0);
  return r;
}

// All compositions of mesh into k positive parts, as weights.
void compositions(int mesh, int k, std::vector<std::vector<double>>& out) {
  std::vector<int> parts(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == k - 1) {
      parts[static_cast<std::size_t>(idx)] = left;
      std::vector<double> w(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        w[static_cast<std::size_t>(j)] =
            static_cast<double>(parts[static_cast<std::size_t>(j)]) / mesh;
      }
      out.push_back(std::move(w));
      return;
    }
    for (int v = 1; v <= left - (k - 1 - idx); ++v) {
      parts[static_cast<std::size_t>(idx)] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, mesh);
}

void simplex_grid(const std::vector<ProfileIndex>& members, int mesh,
                  int max_support, Runner& run) {
  const std::size_t m = members.size();
  const int kmax = std::min<int>(max_support, static_cast<int>(m));
  double total = 0.0;
  for (int k = 2; k <= std::min(kmax, mesh); ++k) {
    total += binomial(static_cast<double>(m), k) * binomial(mesh - 1, k - 1);
  }
  if (total > kMaxGridSigmas) {
    fail(ErrorCode::kInvalidArgument,
         "simplex grid search too large (" + std::to_string(total) +
             " mixtures); lower mesh or max_support, or use dirichlet");
  }
  for (int k = 2; k <= std::min(kmax, mesh); ++k) {
    std::vector<std::vector<double>> comps;
    compositions(mesh, k, comps);
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
    while (true) {
      for (const auto& w : comps) {
        ProfileMixture s;
        for (std::size_t j = 0; j < idx.size(); ++j) {
          s.support.push_back(members[idx[j]]);
          s.weights.push_back(w[j]);
        }
        run.push(std::move(s));
      }
      // Next k-subset in lexicographic order.
      std::size_t j = idx.size();
      while (j-- > 0) {
        if (idx[j] < m - (idx.size() - j)) break;
      }
      if (j == static_cast<std::size_t>(-1)) break;
      ++idx[j];
      for (std::size_t l = j + 1; l < idx.size(); ++l) idx[l] = idx[l - 1] + 1;
    }
  }
}

double unit_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void dirichlet(const std::vector<ProfileIndex>& members, int samples,
               int max_support, std::uint64_t seed, Runner& run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x5eedu};
  std::mt19937_64 rng(seq);
  const std::size_t m = members.size();
  const std::size_t kmax = std::min<std::size_t>(static_cast<std::size_t>(max_support), m);
  std::vector<std::size_t> pick;
  for (int s = 0; s < samples; ++s) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % kmax);
    pick.clear();
    while (pick.size() < k) {
      const std::size_t c = static_cast<std::size_t>(rng() % m);
      if (std::find(pick.begin(), pick.end(), c) == pick.end()) pick.push_back(c);
    }
    ProfileMixture sigma;
    double total = 0.0;
    for (std::size_t c : pick) {
      const double g = -std::log(unit_uniform(rng));
      sigma.support.push_back(members[c]);
      sigma.weights.push_back(g);
      total += g;
    }
    for (auto& w : sigma.weights) w /= total;
    sigma.canonicalize();
    double sum = 0.0;
    for (double w : sigma.weights) sum += w;
    sigma.weights.back() += 1.0 - sum;
    run.push(std::move(sigma));
  }
}

// Roots in [0, 1] of a w^2 + b w + c.
void unit_roots(double a, double b, double c, std::vector<double>& out) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return;
  auto keep = [&](double w) {
    if (w > -1e-12 && w < 1.0 + 1e-12) out.push_back(std::clamp(w, 0.0, 1.0));
  };
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0.0) keep(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  if (q != 0.0) {
    keep(q / a);
    keep(c / q);
  } else {
    keep(0.0);
  }
}

void structured(const Evaluator& ev, const std::vector<ProfileIndex>& members,
                Runner& run) {
  const Game& game = ev.game();
  const GaussianFast& fast = *ev.fast();
  const std::size_t n = game.num_players();
  const ProfileSpace& space = game.space();

  // Per-player extremes of the point-mass minimizer, g and theta*g.
  std::vector<ProfileIndex> ext;
  for (std::size_t i = 0; i < n; ++i) {
    const double ts = game.gaussian(i).theta_true;
    double lo[3], hi[3];
    ProfileIndex arg_lo[3] = {0, 0, 0}, arg_hi[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::numeric_limits<double>::infinity();
      hi[k] = -lo[k];
    }
    for (ProfileIndex p : members) {
      const double r = game.model_rate(i, p);
      const double s = game.true_rate(i, p);
      const double g = game.interaction(i, space.without(p, i));
      const double tc = ts * (r * s) / (r * r);
      const double v[3] = {tc, g, tc * g};
      for (int k = 0; k < 3; ++k) {
        if (v[k] < lo[k]) {
          lo[k] = v[k];
          arg_lo[k] = p;
        }
        if (v[k] > hi[k]) {
          hi[k] = v[k];
          arg_hi[k] = p;
        }
      }
    }
    for (int k = 0; k < 3; ++k) {
      ext.push_back(arg_lo[k]);
      ext.push_back(arg_hi[k]);
    }
  }
  std::sort(ext.begin(), ext.end());
  ext.erase(std::unique(ext.begin(), ext.end()), ext.end());

  std::vector<double> ws;
  for (std::size_t a = 0; a < ext.size(); ++a) {
    for (std::size_t b = a + 1; b < ext.size(); ++b) {
      const ProfileIndex p = ext[a];
      const ProfileIndex q = ext[b];
      ws.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double ts = game.gaussian(i).theta_true;
        const double rp = game.model_rate(i, p), sp = game.true_rate(i, p);
        const double rq = game.model_rate(i, q), sq = game.true_rate(i, q);
        const double np = rp * sp, nq = rq * sq, dp = rp * rp, dq = rq * rq;
        const double gp = game.interaction(i, space.without(p, i));
        const double gq = game.interaction(i, space.without(q, i));

        // Targets on theta^m: grid points and KL tie points between them.
        const Grid& grid = game.params(i);
        const double t0 = ts * np / dp, t1 = ts * nq / dq;
        const double tlo = std::min(t0, t1), thi = std::max(t0, t1);
        auto theta_target = [&](double t) {
          const double fp = ts * np - t * dp;
          const double fq = ts * nq - t * dq;
          if (fp == fq) return;
          const double w = fp / (fp - fq);
          if (w > 0.0 && w < 1.0) ws.push_back(w);
        };
        if (thi > tlo) {
          const std::size_t j0 = grid.floor_index(tlo);
          for (std::size_t j = j0; j < grid.size() && grid[j] <= thi; ++j) {
            if (grid[j] >= tlo) theta_target(grid[j]);
            if (j + 1 < grid.size()) {
              const double mid = 0.5 * (grid[j] + grid[j + 1]);
              if (mid >= tlo && mid <= thi) theta_target(mid);
            }
          }
        }

        // Targets on the best-response index s = theta^m * E[g]: cost kinks
        // and their midpoints.
        const auto& kinks = fast.kinks(i);
        if (kinks.empty()) continue;
        const double n0 = np, n1 = nq - np, d0 = dp, d1 = dq - dp, e0 = gp, e1 = gq - gp;
        double slo = std::numeric_limits<double>::infinity(), shi = -slo;
        for (int k = 0; k <= 64; ++k) {
          const double w = k / 64.0;
          const double sv = ts * (n0 + n1 * w) / (d0 + d1 * w) * (e0 + e1 * w);
          slo = std::min(slo, sv);
          shi = std::max(shi, sv);
        }
        const double pad = 0.05 * (shi - slo) + 1e-12;
        if (!(shi > slo)) continue;
        auto s_target = [&](double t) {
          const std::size_t before = ws.size();
          unit_roots(ts * n1 * e1, ts * (n0 * e1 + n1 * e0) - t * d1, ts * n0 * e0 - t * d0, ws);
          ws.erase(std::remove_if(ws.begin() + static_cast<std::ptrdiff_t>(before), ws.end(),
                                  [](double w) { return !(w > 0.0 && w < 1.0); }),
                   ws.end());
        };
        const auto first = std::lower_bound(kinks.begin(), kinks.end(), slo - pad);
        for (auto it = first; it != kinks.end() && *it <= shi + pad; ++it) {
          s_target(*it);
          if (it + 1 != kinks.end()) s_target(0.5 * (*it + *(it + 1)));
        }
      }
      std::sort(ws.begin(), ws.end());
      ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
      for (double w : ws) run.push(ProfileMixture::two_point(p, q, w));
    }
  }
}

struct LpTables {
  // kl[j][k], util[j][x][k] for member k.
  std::vector<std::vector<double>> kl;
  std::vector<std::vector<std::vector<double>>> util;
};

LpTables lp_tables(const Game& game, std::size_t i,
                   const std::vector<ProfileIndex>& members) {
  const ProfileSpace& space = game.space();
  const std::size_t nt = game.params(i).size();
  const std::size_t na = game.actions(i).size();
  const std::size_t m = members.size();
  LpTables t;
  t.kl.assign(nt, std::vector<double>(m));
  t.util.assign(nt, std::vector<std::vector<double>>(na, std::vector<double>(m)));
  for (std::size_t k = 0; k < m; ++k) {
    const ProfileIndex p = members[k];
    const ProfileIndex key = space.without(p, i);
    for (std::size_t j = 0; j < nt; ++j) {
      t.kl[j][k] = kl_point(game, i, j, p);
      for (std::size_t x = 0; x < na; ++x) {
        if (game.is_gaussian(i)) {
          const auto& gm = game.gaussian(i);
          const double th = game.params(i)[j];
          t.util[j][x][k] = th * (gm.alpha + game.action_value(i, x) * game.interaction(i, key)) -
                            game.cost_table(i)[x];
        } else {
          t.util[j][x][k] = game.payoff_table(i, j, space.with(key, i, x));
        }
      }
    }
  }
  return t;
}

void add_player_rows(lp::Problem& pb, const LpTables& t, std::size_t x,
                     std::size_t j, double slack) {
  const std::size_t m = pb.num_vars;
  std::vector<double> row(m);
  for (std::size_t l = 0; l < t.kl.size(); ++l) {
    if (l == j) continue;
    for (std::size_t k = 0; k < m; ++k) row[k] = t.kl[j][k] - t.kl[l][k];
    pb.add_ub(row, slack);
  }
  for (std::size_t y = 0; y < t.util[j].size(); ++y) {
    if (y == x) continue;
    for (std::size_t k = 0; k < m; ++k) row[k] = t.util[j][y][k] - t.util[j][x][k];
    pb.add_ub(row, slack);
  }
}

ProfileMixture lp_sigma(const std::vector<ProfileIndex>& members,
                        const std::vector<double>& x) {
  ProfileMixture s;
  double total = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (x[k] > 1e-15) {
      s.support.push_back(members[k]);
      s.weights.push_back(x[k]);
      total += x[k];
    }
  }
  for (auto& w : s.weights) w /= total;
  double sum = 0.0;
  for (double w : s.weights) sum += w;
  if (!s.weights.empty()) s.weights.back() += 1.0 - sum;
  return s;
}

void exact_lp(const Game& game, const std::vector<ProfileIndex>& members,
              double tol, Collector& out) {
  const std::size_t m = members.size();
  if (m > kMaxLpProfiles) {
    fail(ErrorCode::kInvalidArgument,
         "exact LP search limited to " + std::to_string(kMaxLpProfiles) +
             " profiles; use another policy");
  }
  const std::size_t n = game.num_players();
  const double slack = 0.5 * tol;
  std::vector<LpTables> tables(n);
  // feas[i][x] lists parameter indices j for which (x, j) is LP-feasible.
  std::vector<std::vector<std::vector<std::size_t>>> feas(n);
  for (std::size_t i = 0; i < n; ++i) {
    tables[i] = lp_tables(game, i, members);
    const std::size_t na = game.actions(i).size();
    const std::size_t nt = game.params(i).size();
    feas[i].resize(na);
    std::vector<std::vector<char>> ok(na, std::vector<char>(nt, 0));
    std::vector<std::vector<ProfileMixture>> sig(na, std::vector<ProfileMixture>(nt));
    parallel_for(na * nt, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const std::size_t x = c / nt, j = c % nt;
        lp::Problem pb;
        pb.num_vars = m;
        pb.add_eq(std::vector<double>(m, 1.0), 1.0);
        add_player_rows(pb, tables[i], x, j, slack);
        const lp::Result r = lp::find_feasible(pb);
        if (!r.feasible) continue;
        ProfileMixture s = lp_sigma(members, r.x);
        if (s.support.empty() || !certify_player(game, i, x, s, tol)) continue;
        ok[x][j] = 1;
        sig[x][j] = std::move(s);
      }
    });
    for (std::size_t x = 0; x < na; ++x) {
      for (std::size_t j = 0; j < nt; ++j) {
        if (!ok[x][j]) continue;
        feas[i][x].push_back(j);
        if (out.mode() == Collector::Mode::kPlayer) out.mark_action(i, x, sig[x][j]);
      }
    }
  }
  if (out.mode() == Collector::Mode::kPlayer) return;

  // Joint LPs for candidate profiles in the product of per-player survivors.
  std::vector<std::vector<std::size_t>> acts(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < feas[i].size(); ++x) {
      if (!feas[i][x].empty()) acts[i].push_back(x);
    }
    if (acts[i].empty()) return;
  }
  std::vector<ProfileIndex> cands;
  {
    SurvivorSet box = SurvivorSet::product(game.space(), acts);
    box.for_each([&](ProfileIndex p) {
      if (!out.has_profile(p)) cands.push_back(p);
    });
  }
  const ProfileSpace& space = game.space();
  std::vector<ProfileMixture> found(cands.size());
  std::vector<char> hit(cands.size(), 0);
  parallel_for(cands.size(), [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> pos(n);
    for (std::size_t c = b; c < e; ++c) {
      const ProfileIndex p = cands[c];
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        lp::Problem pb;
        pb.num_vars = m;
        pb.add_eq(std::vector<double>(m, 1.0), 1.0);
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t x = space.coord(p, i);
          add_player_rows(pb, tables[i], x, feas[i][x][pos[i]], slack);
        }
        const lp::Result r = lp::find_feasible(pb);
        if (r.feasible) {
          ProfileMixture s = lp_sigma(members, r.x);
          if (!s.support.empty() && certify(game, p, s, tol).ok) {
            found[c] = std::move(s);
            hit[c] = 1;
            break;
          }
        }
        std::size_t i = n;
        while (i-- > 0) {
          if (++pos[i] < feas[i][space.coord(p, i)].size()) break;
          pos[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
  });
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (hit[c]) out.mark_profile(cands[c], found[c]);
  }
}

}  // namespace

void search(const Game& game, const SurvivorSet& a,
            const SigmaSearchPolicy& policy, double tol, Collector& out) {
  policy.validate();
  if (a.empty()) fail(ErrorCode::kEmptySurvivorSet, "operator applied to an empty set");
  const auto kind = policy.resolve(game);
  const Evaluator ev(game, tol);
  const std::vector<ProfileIndex> members = a.members();
  Runner run(ev, out);
  run.point_masses(members);
  switch (kind) {
    case SigmaSearchPolicy::Kind::kExactLP:
      exact_lp(game, members, tol, out);
      break;
    case SigmaSearchPolicy::Kind::kSimplexGrid:
      simplex_grid(members, policy.mesh, policy.max_support, run);
      break;
    case SigmaSearchPolicy::Kind::kDirichletSample:
      dirichlet(members, policy.samples, policy.max_support, policy.seed, run);
      break;
    case SigmaSearchPolicy::Kind::kStructuredMoments:
      if (!ev.fast()) {
        fail(ErrorCode::kInvalidArgument, "structured policy needs linear-Gaussian players");
      }
      structured(ev, members, run);
      break;
    case SigmaSearchPolicy::Kind::kAuto:
      break;
  }
  run.flush();
}

}  // namespace bnlab::detail
