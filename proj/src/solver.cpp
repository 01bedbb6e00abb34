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

#include "bnlab/solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "bnlab/errors.hpp"
#include "solver_internal.hpp"

namespace bnlab {

using detail::Collector;

SigmaSearchPolicy SigmaSearchPolicy::from_config(const SolverConfig& cfg) {
  SigmaSearchPolicy p;
  p.kind = parse_kind(cfg.policy);
  p.mesh = cfg.mesh;
  p.max_support = cfg.max_support;
  p.samples = cfg.samples;
  p.seed = cfg.seed;
  p.validate();
  return p;
}

SigmaSearchPolicy::Kind SigmaSearchPolicy::parse_kind(const std::string& name) {
  if (name == "auto") return Kind::kAuto;
  if (name == "exact_lp") return Kind::kExactLP;
  if (name == "simplex_grid") return Kind::kSimplexGrid;
  if (name == "dirichlet") return Kind::kDirichletSample;
  if (name == "structured") return Kind::kStructuredMoments;
  fail(ErrorCode::kInvalidArgument, "unknown sigma search policy '" + name + "'");
}

const char* SigmaSearchPolicy::kind_name(Kind kind) {
  switch (kind) {
    case Kind::kAuto:
      return "auto";
    case Kind::kExactLP:
      return "exact_lp";
    case Kind::kSimplexGrid:
      return "simplex_grid";
    case Kind::kDirichletSample:
      return "dirichlet";
    case Kind::kStructuredMoments:
      return "structured";
  }
  return "auto";
}

void SigmaSearchPolicy::validate() const {
  if (mesh < 2) fail(ErrorCode::kInvalidArgument, "policy mesh must be >= 2");
  if (max_support < 1) fail(ErrorCode::kInvalidArgument, "policy max_support must be >= 1");
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "policy samples must be >= 1");
}

SigmaSearchPolicy::Kind SigmaSearchPolicy::resolve(const Game& game) const {
  if (kind != Kind::kAuto) return kind;
  return game.all_gaussian() ? Kind::kStructuredMoments : Kind::kExactLP;
}

const char* operator_name(Operator op) {
  switch (op) {
    case Operator::kGamma:
      return "gamma";
    case Operator::kBernheimPearce:
      return "bp";
    case Operator::kWeak:
      return "weak";
  }
  return "gamma";
}

Operator parse_operator(const std::string& name) {
  if (name == "gamma") return Operator::kGamma;
  if (name == "bp") return Operator::kBernheimPearce;
  if (name == "weak") return Operator::kWeak;
  fail(ErrorCode::kInvalidArgument, "unknown operator '" + name + "'");
}

ApplyResult gamma_apply_detailed(const Game& game, const SurvivorSet& a,
                                 const SigmaSearchPolicy& policy,
                                 const ApplyOptions& opts) {
  Collector out(game, Collector::Mode::kProfile, opts);
  detail::search(game, a, policy, opts.tol, out);
  ApplyResult r = out.take_profiles();
  if (!opts.restrict_to && r.survivors.empty()) {
    fail(ErrorCode::kEmptySurvivorSet, "no profile survives the operator");
  }
  return r;
}

SurvivorSet gamma_apply(const Game& game, const SurvivorSet& a,
                        const SigmaSearchPolicy& policy, double tol) {
  ApplyOptions opts;
  opts.tol = tol;
  return gamma_apply_detailed(game, a, policy, opts).survivors;
}

namespace {

PlayerJustification justification(const Game& game, const SurvivorSet& a,
                                  const SigmaSearchPolicy& policy, double tol,
                                  bool record) {
  ApplyOptions opts;
  opts.tol = tol;
  opts.record_witnesses = record;
  Collector out(game, Collector::Mode::kPlayer, opts);
  detail::search(game, a, policy, tol, out);
  return out.take_actions();
}

SurvivorSet weak_from(const SurvivorSet& a, const PlayerJustification& pj) {
  const ProfileSpace& space = a.space();
  const std::size_t n = space.num_players();
  std::vector<std::vector<char>> keep(n);
  for (std::size_t i = 0; i < n; ++i) {
    keep[i].assign(space.size(i), 0);
    for (std::size_t x : pj.actions[i]) keep[i][x] = 1;
  }
  SurvivorSet out(space);
  a.for_each([&](ProfileIndex p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!keep[i][space.coord(p, i)]) return;
    }
    out.insert(p);
  });
  return out;
}

}  // namespace

PlayerJustification player_justification(const Game& game,
                                         const SurvivorSet& a,
                                         const SigmaSearchPolicy& policy,
                                         double tol) {
  return justification(game, a, policy, tol, true);
}

SurvivorSet gamma_weak_apply(const Game& game, const SurvivorSet& a,
                             const SigmaSearchPolicy& policy, double tol) {
  SurvivorSet out = weak_from(a, justification(game, a, policy, tol, false));
  if (out.empty()) fail(ErrorCode::kEmptySurvivorSet, "no profile survives the weak operator");
  return out;
}

SurvivorSet gamma_bp_apply(const Game& game, const SurvivorSet& a,
                           const SigmaSearchPolicy& policy, double tol) {
  if (!a.is_product()) {
    fail(ErrorCode::kInvalidArgument, "bp operator needs a product set");
  }
  const PlayerJustification pj = justification(game, a, policy, tol, false);
  SurvivorSet out = SurvivorSet::product(a.space(), pj.actions);
  if (out.empty()) fail(ErrorCode::kEmptySurvivorSet, "no profile survives the bp operator");
  return out;
}

namespace {

RoundRecord make_record(const Game& game, int round, const SurvivorSet& s,
                        double ms) {
  RoundRecord r;
  r.round = round;
  r.survivors = s.count();
  r.wall_ms = ms;
  const auto proj = s.projections();
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj[i].empty()) {
      r.box.emplace_back(0.0, 0.0);
    } else {
      r.box.emplace_back(game.action_value(i, proj[i].front()),
                         game.action_value(i, proj[i].back()));
    }
  }
  return r;
}

SurvivorSet step(const Game& game, const SurvivorSet& b,
                 const SigmaSearchPolicy& policy, const IterateOptions& opts) {
  switch (opts.op) {
    case Operator::kGamma: {
      ApplyOptions ao;
      ao.tol = opts.tol;
      ao.restrict_to = &b;
      return gamma_apply_detailed(game, b, policy, ao).survivors;
    }
    case Operator::kWeak:
      return weak_from(b, justification(game, b, policy, opts.tol, false));
    case Operator::kBernheimPearce: {
      SurvivorSet s = SurvivorSet::product(
          b.space(), justification(game, b, policy, opts.tol, false).actions);
      s &= b;
      return s;
    }
  }
  return b;
}

// Re-derives witnesses for a candidate fixed set and certifies them through
// model-core. Returns the number of members removed.
std::uint64_t certify_pass(const Game& game, SurvivorSet& b,
                           const SigmaSearchPolicy& policy,
                           const IterateOptions& opts, FixedPointResult& res) {
  res.profile_witnesses.clear();
  res.action_witnesses.clear();
  res.witnesses_truncated = false;
  std::uint64_t dropped = 0;
  if (opts.op == Operator::kGamma) {
    ApplyOptions ao;
    ao.tol = opts.tol;
    ao.record_witnesses = true;
    ao.restrict_to = &b;
    ApplyResult ar = gamma_apply_detailed(game, b, policy, ao);
    SurvivorSet keep(b.space());
    for (const auto& [p, k] : ar.witness_of) {
      Certificate cert = certify(game, p, ar.sigmas[k], opts.tol);
      if (!cert.ok) continue;
      keep.insert(p);
      if (res.profile_witnesses.size() < opts.witness_cap) {
        res.profile_witnesses.push_back({p, ar.sigmas[k], std::move(cert)});
      } else {
        res.witnesses_truncated = true;
      }
    }
    dropped = b.count() - keep.count();
    b = std::move(keep);
    return dropped;
  }
  const PlayerJustification pj = justification(game, b, policy, opts.tol, true);
  const ProfileSpace& space = b.space();
  const std::size_t n = space.num_players();
  const auto proj = b.projections();
  std::vector<std::vector<char>> ok(n);
  for (std::size_t i = 0; i < n; ++i) {
    ok[i].assign(space.size(i), 0);
    for (std::size_t k = 0; k < pj.actions[i].size(); ++k) {
      const std::size_t x = pj.actions[i][k];
      if (!std::binary_search(proj[i].begin(), proj[i].end(), x)) continue;
      const ProfileMixture& sigma = pj.sigmas[pj.witness[i][k]];
      auto pc = certify_player(game, i, x, sigma, opts.tol);
      if (!pc) continue;
      ok[i][x] = 1;
      if (res.action_witnesses.size() < opts.witness_cap) {
        res.action_witnesses.push_back({i, x, sigma, std::move(*pc)});
      } else {
        res.witnesses_truncated = true;
      }
    }
  }
  SurvivorSet keep(space);
  b.for_each([&](ProfileIndex p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!ok[i][space.coord(p, i)]) return;
    }
    keep.insert(p);
  });
  dropped = b.count() - keep.count();
  b = std::move(keep);
  return dropped;
}

}  // namespace

FixedPointResult iterate_to_fixed(const Game& game,
                                  const SigmaSearchPolicy& policy,
                                  int max_rounds, const IterateOptions& opts) {
  if (max_rounds < 1) fail(ErrorCode::kInvalidArgument, "max_rounds must be >= 1");
  policy.validate();
  FixedPointResult res;
  res.op = opts.op;
  SurvivorSet b = SurvivorSet::full(game.space());
  for (int round = 1; round <= max_rounds; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    SurvivorSet next = step(game, b, policy, opts);
    bool fixed = next == b;
    b = std::move(next);
    if (fixed && !b.empty()) {
      const std::uint64_t dropped = certify_pass(game, b, policy, opts, res);
      res.uncertified_dropped += dropped;
      fixed = dropped == 0;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.history.push_back(make_record(game, round, b, ms));
    if (b.empty()) {
      fail(ErrorCode::kEmptySurvivorSet,
           "survivor set became empty in round " + std::to_string(round));
    }
    if (fixed) {
      res.converged = true;
      break;
    }
  }
  res.survivors = std::move(b);
  return res;
}

bool bne_check(const Game& game, ProfileIndex profile, double tol) {
  return certify(game, profile, ProfileMixture::point(profile), tol).ok;
}

bool phi_apply(const Game& game, const ProfileMixture& candidate,
               const SurvivorSet& b, const SigmaSearchPolicy& policy,
               double tol) {
  candidate.validate(game.space());
  ApplyOptions opts;
  opts.tol = tol;
  Collector out(game, Collector::Mode::kProfile, opts);
  detail::search(game, b, policy, tol, out);
  const SurvivorSet image = out.take_profiles().survivors;
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    if (candidate.weights[k] > 0.0 && !image.contains(candidate.support[k])) return false;
  }
  return true;
}

MomentBox moment_box(const Game& game, const SurvivorSet& a) {
  if (!game.all_gaussian()) {
    fail(ErrorCode::kInvalidArgument, "moment box needs linear-Gaussian players");
  }
  const std::size_t n = game.num_players();
  const ProfileSpace& space = game.space();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  MomentBox box;
  box.theta_m.assign(n, {kInf, -kInf});
  box.interaction.assign(n, {kInf, -kInf});
  a.for_each([&](ProfileIndex p) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = game.model_rate(i, p);
      const double s = game.true_rate(i, p);
      const double t = game.gaussian(i).theta_true * (r * s) / (r * r);
      const double g = game.interaction(i, space.without(p, i));
      box.theta_m[i].first = std::min(box.theta_m[i].first, t);
      box.theta_m[i].second = std::max(box.theta_m[i].second, t);
      box.interaction[i].first = std::min(box.interaction[i].first, g);
      box.interaction[i].second = std::max(box.interaction[i].second, g);
    }
  });
  return box;
}

}  // namespace bnlab
