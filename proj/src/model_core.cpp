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

#include "bnlab/model_core.hpp"

#include <algorithm>
#include <cmath>

#include "bnlab/errors.hpp"
#include "bnlab/simd.hpp"

namespace bnlab {

double gaussian_kl(double model_mean, double true_mean) {
  const double d = model_mean - true_mean;
  return 0.5 * d * d;
}

double kl_point(const Game& game, std::size_t player, std::size_t theta,
                ProfileIndex profile) {
  if (game.is_gaussian(player)) {
    const auto& m = game.gaussian(player);
    const double th = game.params(player)[theta];
    return gaussian_kl(th * game.model_rate(player, profile),
                       m.theta_true * game.true_rate(player, profile));
  }
  return game.kl_table(player, theta, profile);
}

namespace detail {

void expected_kl(const Game& game, const ProfileMixture& sigma,
                 std::size_t player, double* out) {
  const Grid& theta = game.params(player);
  const std::size_t nt = theta.size();
  if (game.is_gaussian(player)) {
    const double ts = game.gaussian(player).theta_true;
    double srr = 0.0, srs = 0.0, sss = 0.0;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      const double r = game.model_rate(player, sigma.support[k]);
      const double s = game.true_rate(player, sigma.support[k]);
      const double w = sigma.weights[k];
      srr += w * r * r;
      srs += w * r * s;
      sss += w * s * s;
    }
    simd::quadratic_eval(out, theta.data(), nt, 0.5 * srr, ts * srs,
                         0.5 * ts * ts * sss);
    return;
  }
  std::fill(out, out + nt, 0.0);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    simd::axpy(out, game.kl_row(player, sigma.support[k]), nt,
               sigma.weights[k]);
  }
}

void utilities(const Game& game, std::size_t player, const SparseBelief& mu,
               const OpponentMixture& opp, double* out) {
  const Grid& acts = game.actions(player);
  const std::size_t n = acts.size();
  if (game.is_gaussian(player)) {
    const Grid& theta = game.params(player);
    double tbar = 0.0;
    for (std::size_t k = 0; k < mu.index.size(); ++k) {
      tbar += mu.weight[k] * theta[mu.index[k]];
    }
    double eg = 0.0;
    for (std::size_t k = 0; k < opp.keys.size(); ++k) {
      eg += opp.weights[k] * game.interaction(player, opp.keys[k]);
    }
    simd::affine_scores(out, acts.data(), game.cost_table(player).data(), n,
                        tbar * game.gaussian(player).alpha, tbar * eg);
    return;
  }
  const ProfileSpace& space = game.space();
  for (std::size_t x = 0; x < n; ++x) {
    double u = 0.0;
    for (std::size_t k = 0; k < opp.keys.size(); ++k) {
      const double* row = game.payoff_row(player, space.with(opp.keys[k], player, x));
      double v = 0.0;
      for (std::size_t m = 0; m < mu.index.size(); ++m) {
        v += mu.weight[m] * row[mu.index[m]];
      }
      u += opp.weights[k] * v;
    }
    out[x] = u;
  }
}

}  // namespace detail

namespace {

SparseBelief sparse_of(const ParamBelief& b) {
  SparseBelief s;
  for (std::size_t j = 0; j < b.weights.size(); ++j) {
    if (b.weights[j] != 0.0) {
      s.index.push_back(j);
      s.weight.push_back(b.weights[j]);
    }
  }
  return s;
}

SparseBelief point_belief(std::size_t j) { return {{j}, {1.0}}; }

// p on a, 1 - p on b.
SparseBelief pair_belief(std::size_t a, std::size_t b, double p) {
  if (p >= 1.0) return point_belief(a);
  if (p <= 0.0) return point_belief(b);
  return {{a, b}, {p, 1.0 - p}};
}

std::vector<std::size_t> band_min(const std::vector<double>& v, double tol) {
  const double m = *std::min_element(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] <= m + tol) out.push_back(j);
  }
  return out;
}

// Vertices, barycenter and the finest simplex mesh with at most cap points.
std::vector<SparseBelief> simplex_beliefs(const std::vector<std::size_t>& tie,
                                          std::size_t cap) {
  const std::size_t k = tie.size();
  std::vector<SparseBelief> out;
  for (std::size_t j : tie) out.push_back(point_belief(j));
  SparseBelief bary;
  for (std::size_t j : tie) {
    bary.index.push_back(j);
    bary.weight.push_back(1.0 / static_cast<double>(k));
  }
  out.push_back(bary);
  // Largest mesh with at most cap points.
  std::size_t d = 1;
  auto count = [k](std::size_t dd) {
    double c = 1.0;
    for (std::size_t t = 1; t < k; ++t) {
      c = c * static_cast<double>(dd + t) / static_cast<double>(t);
    }
    return c;
  };
  while (d < 64 && count(d + 1) <= static_cast<double>(cap)) ++d;
  if (d < 2) return out;
  std::vector<std::size_t> parts(k, 0);
  auto emit = [&]() {
    SparseBelief b;
    for (std::size_t t = 0; t < k; ++t) {
      if (parts[t] == 0) continue;
      b.index.push_back(tie[t]);
      b.weight.push_back(static_cast<double>(parts[t]) / static_cast<double>(d));
    }
    if (b.index.size() > 1) out.push_back(std::move(b));
  };
  auto rec = [&](auto&& self, std::size_t t, std::size_t left) -> void {
    if (t + 1 == k) {
      parts[t] = left;
      emit();
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      parts[t] = v;
      self(self, t + 1, left - v);
    }
  };
  rec(rec, 0, d);
  return out;
}

struct PlayerContext {
  std::vector<std::size_t> tie;
  OpponentMixture opp;
};

PlayerContext context(const Game& game, const ProfileMixture& sigma,
                      std::size_t player, double tol) {
  PlayerContext c;
  std::vector<double> ekl(game.params(player).size());
  detail::expected_kl(game, sigma, player, ekl.data());
  c.tie = band_min(ekl, tol);
  c.opp = OpponentMixture::from(sigma, game.space(), player);
  return c;
}

// Envelope breakpoints in p of max_x u0[x] + p (u1[x] - u0[x]) on [0, 1].
std::vector<double> envelope_breakpoints(const std::vector<double>& u0,
                                         const std::vector<double>& u1) {
  const std::size_t n = u0.size();
  std::vector<double> d(n);
  for (std::size_t x = 0; x < n; ++x) d[x] = u1[x] - u0[x];
  auto argmax_at = [&](double p) {
    std::size_t best = 0;
    double bv = u0[0] + p * d[0];
    for (std::size_t x = 1; x < n; ++x) {
      const double v = u0[x] + p * d[x];
      if (v > bv) {
        bv = v;
        best = x;
      }
    }
    return std::make_pair(best, bv);
  };
  struct Piece {
    double pl;
    std::size_t xl;
    double pr;
    std::size_t xr;
  };
  std::vector<double> out = {0.0, 1.0};
  std::vector<Piece> stack = {{0.0, argmax_at(0.0).first, 1.0, argmax_at(1.0).first}};
  std::size_t guard = 0;
  while (!stack.empty() && guard++ < 4 * n + 16) {
    const Piece pc = stack.back();
    stack.pop_back();
    if (pc.xl == pc.xr) continue;
    const double den = d[pc.xr] - d[pc.xl];
    if (den == 0.0) continue;
    double ps = (u0[pc.xl] - u0[pc.xr]) / den;
    ps = std::clamp(ps, pc.pl, pc.pr);
    const auto [xs, vs] = argmax_at(ps);
    const double vl = u0[pc.xl] + ps * d[pc.xl];
    if (vs <= vl + 1e-12 * (1.0 + std::abs(vl)) || xs == pc.xl || xs == pc.xr) {
      out.push_back(ps);
    } else {
      stack.push_back({ps, xs, pc.pr, pc.xr});
      stack.push_back({pc.pl, pc.xl, ps, xs});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<double> expected_kl(const Game& game, const ProfileMixture& sigma,
                                std::size_t player) {
  sigma.validate(game.space());
  std::vector<double> out(game.params(player).size());
  detail::expected_kl(game, sigma, player, out.data());
  return out;
}

std::vector<std::size_t> kl_minimizer_set(const Game& game,
                                          const ProfileMixture& sigma,
                                          std::size_t player, double tol) {
  return band_min(expected_kl(game, sigma, player), tol);
}

double expected_utility(const Game& game, std::size_t player,
                        std::size_t action, const ParamBelief& belief,
                        const OpponentMixture& opp) {
  return utility_vector(game, player, belief, opp).at(action);
}

std::vector<double> utility_vector(const Game& game, std::size_t player,
                                   const ParamBelief& belief,
                                   const OpponentMixture& opp) {
  if (belief.weights.size() != game.params(player).size()) {
    fail(ErrorCode::kInvalidArgument, "belief does not match parameter grid");
  }
  std::vector<double> u(game.actions(player).size());
  detail::utilities(game, player, sparse_of(belief), opp, u.data());
  return u;
}

std::vector<std::size_t> best_response_set(const Game& game,
                                           std::size_t player,
                                           const ParamBelief& belief,
                                           const OpponentMixture& opp,
                                           double tol) {
  const std::vector<double> u = utility_vector(game, player, belief, opp);
  const double m = simd::max_value(u.data(), u.size());
  std::vector<std::size_t> idx(u.size());
  idx.resize(simd::indices_at_least(u.data(), u.size(), m - tol, idx.data()));
  return idx;
}

std::vector<JustifiedAction> justified_actions(const Game& game,
                                               const ProfileMixture& sigma,
                                               std::size_t player,
                                               double tol) {
  const PlayerContext ctx = context(game, sigma, player, tol);
  const std::size_t n = game.actions(player).size();
  std::vector<double> u(n);
  std::vector<std::size_t> idx(n);
  std::vector<int> chosen(n, -1);
  std::vector<SparseBelief> beliefs;
  auto consider = [&](const SparseBelief& b) {
    detail::utilities(game, player, b, ctx.opp, u.data());
    const double m = simd::max_value(u.data(), n);
    const std::size_t k = simd::indices_at_least(u.data(), n, m - tol, idx.data());
    bool used = false;
    for (std::size_t t = 0; t < k; ++t) {
      if (chosen[idx[t]] < 0) {
        chosen[idx[t]] = static_cast<int>(beliefs.size());
        used = true;
      }
    }
    if (used) beliefs.push_back(b);
  };

  if (ctx.tie.size() == 1) {
    consider(point_belief(ctx.tie[0]));
  } else if (ctx.tie.size() == 2) {
    const std::size_t ja = ctx.tie[0], jb = ctx.tie[1];
    std::vector<double> u0(n), u1(n);
    detail::utilities(game, player, point_belief(jb), ctx.opp, u0.data());
    detail::utilities(game, player, point_belief(ja), ctx.opp, u1.data());
    for (double p : envelope_breakpoints(u0, u1)) consider(pair_belief(ja, jb, p));
  } else {
    for (const auto& b : simplex_beliefs(ctx.tie, 256)) consider(b);
  }

  std::vector<JustifiedAction> out;
  for (std::size_t x = 0; x < n; ++x) {
    if (chosen[x] >= 0) out.push_back({x, beliefs[static_cast<std::size_t>(chosen[x])]});
  }
  return out;
}

std::optional<PlayerCertificate> certify_player(const Game& game,
                                                std::size_t player,
                                                std::size_t action,
                                                const ProfileMixture& sigma,
                                                double tol) {
  sigma.validate(game.space());
  const PlayerContext ctx = context(game, sigma, player, tol);
  const std::size_t n = game.actions(player).size();
  if (action >= n) fail(ErrorCode::kInvalidArgument, "action out of range");
  std::vector<double> u(n);
  auto attempt = [&](const SparseBelief& b) -> std::optional<PlayerCertificate> {
    detail::utilities(game, player, b, ctx.opp, u.data());
    const double m = simd::max_value(u.data(), n);
    const double margin = u[action] - m;
    if (margin >= -tol) return PlayerCertificate{ctx.tie, b, margin};
    return std::nullopt;
  };

  if (ctx.tie.size() == 1) return attempt(point_belief(ctx.tie[0]));
  if (ctx.tie.size() == 2) {
    const std::size_t ja = ctx.tie[0], jb = ctx.tie[1];
    std::vector<double> u0(n), u1(n);
    detail::utilities(game, player, point_belief(jb), ctx.opp, u0.data());
    detail::utilities(game, player, point_belief(ja), ctx.opp, u1.data());
    double lo = 0.0, hi = 1.0;
    for (std::size_t x = 0; x < n && lo <= hi; ++x) {
      const double c = u0[action] - u0[x];
      const double s = (u1[action] - u0[action]) - (u1[x] - u0[x]);
      if (s > 0.0) {
        lo = std::max(lo, (-tol - c) / s);
      } else if (s < 0.0) {
        hi = std::min(hi, (-tol - c) / s);
      } else if (c < -tol) {
        hi = -1.0;
      }
    }
    if (lo > hi) return std::nullopt;
    for (double p : {0.5 * (lo + hi), lo, hi}) {
      if (auto c = attempt(pair_belief(ja, jb, p))) return c;
    }
    return std::nullopt;
  }
  for (const auto& b : simplex_beliefs(ctx.tie, 256)) {
    if (auto c = attempt(b)) return c;
  }
  return std::nullopt;
}

Certificate certify(const Game& game, ProfileIndex profile,
                    const ProfileMixture& sigma, double tol) {
  Certificate cert;
  cert.ok = true;
  const ProfileSpace& space = game.space();
  if (profile >= space.total()) fail(ErrorCode::kInvalidArgument, "profile out of range");
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    auto pc = certify_player(game, i, space.coord(profile, i), sigma, tol);
    if (!pc) {
      cert.ok = false;
      cert.players.clear();
      return cert;
    }
    cert.players.push_back(std::move(*pc));
  }
  return cert;
}

}  // namespace bnlab
