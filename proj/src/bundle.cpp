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


#include "bnlab/bundle.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "bnlab/errors.hpp"
#include "bnlab/spec_io.hpp"
#include "bnlab/survivor.hpp"
#include "json_internal.hpp"

#ifndef BNLAB_VERSION
#define BNLAB_VERSION "0.0.0"
#endif

namespace bnlab {

using detail::Json;
using detail::Node;

const char* tool_version() { return BNLAB_VERSION; }

OperatorRun make_operator_run(const FixedPointResult& r,
                              const SigmaSearchPolicy& policy,
                              const Game& game, double total_ms) {
  OperatorRun o;
  o.op = operator_name(r.op);
  o.policy = SigmaSearchPolicy::kind_name(policy.resolve(game));
  o.converged = r.converged;
  o.survivors = r.survivors.members();
  o.digest = r.survivors.digest();
  o.history = r.history;
  o.profile_witnesses = r.profile_witnesses;
  o.action_witnesses = r.action_witnesses;
  o.witnesses_truncated = r.witnesses_truncated;
  o.uncertified_dropped = r.uncertified_dropped;
  o.total_ms = total_ms;
  return o;
}

namespace {

Json sigma_json(const ProfileMixture& s) {
  return Json{{"support", s.support}, {"weights", s.weights}};
}

ProfileMixture sigma_from(const Node& n) {
  n.only({"support", "weights"});
  ProfileMixture s;
  const Node sup = n.at("support");
  for (std::size_t k = 0; k < sup.size(); ++k) s.support.push_back(sup.at(k).unsigned_integer());
  s.weights = n.at("weights").numbers();
  return s;
}

std::vector<std::size_t> indices_from(const Node& n) {
  std::vector<std::size_t> v(n.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<std::size_t>(n.at(k).unsigned_integer());
  return v;
}

Json player_cert_json(const PlayerCertificate& c) {
  return Json{{"minimizers", c.minimizers},
              {"belief", Json{{"index", c.belief.index}, {"weight", c.belief.weight}}},
              {"margin", c.margin}};
}

PlayerCertificate player_cert_from(const Node& n) {
  n.only({"minimizers", "belief", "margin"});
  PlayerCertificate c;
  c.minimizers = indices_from(n.at("minimizers"));
  const Node b = n.at("belief");
  b.only({"index", "weight"});
  c.belief.index = indices_from(b.at("index"));
  c.belief.weight = b.at("weight").numbers();
  c.margin = n.at("margin").number();
  return c;
}

Json history_json(const std::vector<RoundRecord>& h, bool timing) {
  Json out = Json::array();
  for (const auto& r : h) {
    Json box = Json::array();
    for (const auto& [lo, hi] : r.box) box.push_back(Json::array({lo, hi}));
    Json row{{"round", r.round}, {"survivors", r.survivors}, {"box", box}};
    if (timing) row["wall_ms"] = r.wall_ms;
    out.push_back(row);
  }
  return out;
}

Json operator_json(const OperatorRun& o, bool timing) {
  Json pw = Json::array();
  for (const auto& w : o.profile_witnesses) {
    Json players = Json::array();
    for (const auto& c : w.certificate.players) players.push_back(player_cert_json(c));
    pw.push_back(Json{{"profile", w.profile},
                      {"sigma", sigma_json(w.sigma)},
                      {"certificate", Json{{"ok", w.certificate.ok}, {"players", players}}}});
  }
  Json aw = Json::array();
  for (const auto& w : o.action_witnesses) {
    aw.push_back(Json{{"player", w.player},
                      {"action", w.action},
                      {"sigma", sigma_json(w.sigma)},
                      {"certificate", player_cert_json(w.certificate)}});
  }
  Json j{{"operator", o.op},
         {"policy", o.policy},
         {"converged", o.converged},
         {"survivor_count", o.survivors.size()},
         {"survivors", o.survivors},
         {"digest", o.digest},
         {"history", history_json(o.history, timing)},
         {"profile_witnesses", pw},
         {"action_witnesses", aw},
         {"witnesses_truncated", o.witnesses_truncated},
         {"uncertified_dropped", o.uncertified_dropped}};
  if (timing) j["total_ms"] = o.total_ms;
  return j;
}

OperatorRun operator_from(const Node& n) {
  n.only({"operator", "policy", "converged", "survivor_count", "survivors", "digest", "history",
          "profile_witnesses", "action_witnesses", "witnesses_truncated", "uncertified_dropped",
          "total_ms"});
  OperatorRun o;
  o.op = n.at("operator").str();
  o.policy = n.at("policy").str();
  o.converged = n.at("converged").boolean();
  const Node s = n.at("survivors");
  o.survivors.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) o.survivors.push_back(s.at(k).unsigned_integer());
  o.digest = n.at("digest").str();
  const Node h = n.at("history");
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Node r = h.at(k);
    RoundRecord rr;
    rr.round = r.at("round").int32();
    rr.survivors = r.at("survivors").unsigned_integer();
    if (r.has("wall_ms")) rr.wall_ms = r.at("wall_ms").number();
    const Node box = r.at("box");
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto v = box.at(i).numbers();
      if (v.size() != 2) fail(ErrorCode::kSchema, box.at(i).path() + ": expected [lo, hi]");
      rr.box.emplace_back(v[0], v[1]);
    }
    o.history.push_back(std::move(rr));
  }
  const Node pw = n.at("profile_witnesses");
  for (std::size_t k = 0; k < pw.size(); ++k) {
    const Node w = pw.at(k);
    w.only({"profile", "sigma", "certificate"});
    ProfileWitness pwit;
    pwit.profile = w.at("profile").unsigned_integer();
    pwit.sigma = sigma_from(w.at("sigma"));
    const Node c = w.at("certificate");
    c.only({"ok", "players"});
    pwit.certificate.ok = c.at("ok").boolean();
    const Node pl = c.at("players");
    for (std::size_t i = 0; i < pl.size(); ++i) pwit.certificate.players.push_back(player_cert_from(pl.at(i)));
    o.profile_witnesses.push_back(std::move(pwit));
  }
  const Node aw = n.at("action_witnesses");
  for (std::size_t k = 0; k < aw.size(); ++k) {
    const Node w = aw.at(k);
    w.only({"player", "action", "sigma", "certificate"});
    ActionWitness a;
    a.player = static_cast<std::size_t>(w.at("player").unsigned_integer());
    a.action = static_cast<std::size_t>(w.at("action").unsigned_integer());
    a.sigma = sigma_from(w.at("sigma"));
    a.certificate = player_cert_from(w.at("certificate"));
    o.action_witnesses.push_back(std::move(a));
  }
  o.witnesses_truncated = n.at("witnesses_truncated").boolean();
  o.uncertified_dropped = n.at("uncertified_dropped").unsigned_integer();
  if (n.has("total_ms")) o.total_ms = n.at("total_ms").number();
  return o;
}

Json mixed_json(const MixedRun& m) {
  Json cloud = Json::array();
  for (const auto& p : m.cloud) cloud.push_back(p.probs);
  return Json{{"lambdas", m.lambdas},       {"mesh", m.mesh},
              {"rounds", m.rounds},         {"converged", m.converged},
              {"last_change", m.last_change}, {"cloud", cloud}};
}

MixedRun mixed_from(const Node& n) {
  n.only({"lambdas", "mesh", "rounds", "converged", "last_change", "cloud"});
  MixedRun m;
  m.lambdas = n.at("lambdas").numbers();
  m.mesh = n.at("mesh").int32();
  m.rounds = n.at("rounds").int32();
  m.converged = n.at("converged").boolean();
  m.last_change = n.at("last_change").number();
  const Node c = n.at("cloud");
  for (std::size_t k = 0; k < c.size(); ++k) m.cloud.push_back(MixedProfile{c.at(k).matrix()});
  return m;
}

Json simulation_json(const SimulationSummary& s) {
  Json traces = Json::array();
  for (const auto& t : s.containment.traces) {
    traces.push_back(Json{{"replication", t.replication},
                          {"limit_points", t.limit_points},
                          {"inside_fraction", t.inside_fraction},
                          {"window_mass", t.window_mass},
                          {"max_distance", t.max_distance},
                          {"pass", t.pass}});
  }
  return Json{{"horizon", s.horizon},
              {"replications", s.replications},
              {"seed", s.seed},
              {"thin", s.thin},
              {"survivor_operator", s.survivor_operator},
              {"survivor_digest", s.containment.survivor_digest},
              {"eps", s.containment.eps},
              {"window", s.containment.window},
              {"pass_rate", s.containment.pass_rate},
              {"traces", traces}};
}

SimulationSummary simulation_from(const Node& n) {
  n.only({"horizon", "replications", "seed", "thin", "survivor_operator", "survivor_digest", "eps",
          "window", "pass_rate", "traces"});
  SimulationSummary s;
  s.horizon = n.at("horizon").int32();
  s.replications = n.at("replications").int32();
  s.seed = n.at("seed").unsigned_integer();
  s.thin = n.at("thin").int32();
  s.survivor_operator = n.at("survivor_operator").str();
  s.containment.survivor_digest = n.at("survivor_digest").str();
  s.containment.eps = n.at("eps").number();
  s.containment.window = n.at("window").number();
  s.containment.pass_rate = n.at("pass_rate").number();
  const Node tr = n.at("traces");
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Node t = tr.at(k);
    t.only({"replication", "limit_points", "inside_fraction", "window_mass", "max_distance",
            "pass"});
    TraceContainment c;
    c.replication = t.at("replication").int32();
    const Node lp = t.at("limit_points");
    for (std::size_t j = 0; j < lp.size(); ++j) c.limit_points.push_back(lp.at(j).unsigned_integer());
    c.inside_fraction = t.at("inside_fraction").number();
    c.window_mass = t.at("window_mass").number();
    c.max_distance = t.at("max_distance").number();
    c.pass = t.at("pass").boolean();
    s.containment.traces.push_back(std::move(c));
  }
  return s;
}

Json bundle_json(const ResultBundle& b, bool timing) {
  Json ops = Json::array();
  for (const auto& o : b.operators) ops.push_back(operator_json(o, timing));
  Json j{{"version", b.version},
         {"spec_hash", b.spec_hash},
         {"input_spec_hash", b.input_spec_hash},
         {"spec", detail::spec_to_json(b.spec)},
         {"operators", ops}};
  if (b.mixed) j["mixed"] = mixed_json(*b.mixed);
  if (b.simulation) j["simulation"] = simulation_json(*b.simulation);
  if (timing) {
    Json t = Json::object();
    for (const auto& [k, v] : b.timings_ms) t[k] = v;
    j["timings_ms"] = t;
  }
  return j;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string bundle_to_json(const ResultBundle& b) { return bundle_json(b, true).dump(2) + "\n"; }

std::string bundle_fingerprint(const ResultBundle& b) { return bundle_json(b, false).dump(); }

ResultBundle parse_bundle(const std::string& text) {
  const Json j = detail::parse_json(text, "bundle");
  try {
    const Node root(j, "bundle");
    root.only({"version", "spec_hash", "input_spec_hash", "spec", "operators", "mixed",
               "simulation", "timings_ms"});
    ResultBundle b;
    b.version = root.at("version").str();
    b.spec_hash = root.at("spec_hash").str();
    b.input_spec_hash = root.at("input_spec_hash").str();
    b.spec = detail::spec_from_json(root.at("spec").raw());
    const Node ops = root.at("operators");
    for (std::size_t k = 0; k < ops.size(); ++k) b.operators.push_back(operator_from(ops.at(k)));
    if (root.has("mixed")) b.mixed = mixed_from(root.at("mixed"));
    if (root.has("simulation")) b.simulation = simulation_from(root.at("simulation"));
    if (root.has("timings_ms")) {
      const Node t = root.at("timings_ms");
      t.object();
      for (auto it = t.raw().begin(); it != t.raw().end(); ++it) {
        b.timings_ms.emplace_back(it.key(), Node(it.value(), t.path() + "." + it.key()).number());
      }
    }
    return b;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("bundle: ") + e.what());
  }
}

std::string bundle_summary_csv(const ResultBundle& b) {
  std::ostringstream out;
  out << "operator,policy,round,survivors,wall_ms";
  for (const auto& p : b.spec.players) out << ",lo_" << p.name << ",hi_" << p.name;
  out << "\n";
  for (const auto& o : b.operators) {
    for (const auto& r : o.history) {
      out << o.op << "," << o.policy << "," << r.round << "," << r.survivors << ","
          << fmt(r.wall_ms);
      for (const auto& [lo, hi] : r.box) out << "," << fmt(lo) << "," << fmt(hi);
      out << "\n";
    }
  }
  return out.str();
}

VerifyReport verify_bundle(const ResultBundle& b, bool recompute) {
  VerifyReport rep;
  auto bad = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  if (spec_hash(b.spec) != b.spec_hash) bad("spec hash does not match the embedded spec");
  const Game game(b.spec);
  const double tol = b.spec.solver.tol;
  for (const auto& o : b.operators) {
    const std::string tag = o.op + ": ";
    SurvivorSet s(game.space());
    bool sorted = true;
    for (std::size_t k = 0; k < o.survivors.size(); ++k) {
      const ProfileIndex p = o.survivors[k];
      if (p >= game.space().total() || (k > 0 && p <= o.survivors[k - 1])) {
        sorted = false;
        break;
      }
      s.insert(p);
    }
    if (!sorted) {
      bad(tag + "survivor list is not a sorted list of valid profiles");
      continue;
    }
    if (s.digest() != o.digest) bad(tag + "survivor digest mismatch");
    for (const auto& w : o.profile_witnesses) {
      ++rep.profiles_checked;
      if (!s.contains(w.profile)) {
        bad(tag + "witness for non-survivor " + std::to_string(w.profile));
        continue;
      }
      try {
        w.sigma.validate(game.space());
      } catch (const Error&) {
        bad(tag + "invalid witness distribution for " + std::to_string(w.profile));
        continue;
      }
      const Certificate c = certify(game, w.profile, w.sigma, tol);
      if (!c.ok || !(c == w.certificate)) {
        bad(tag + "witness does not replay for profile " + std::to_string(w.profile));
      }
    }
    const auto proj = s.projections();
    for (const auto& w : o.action_witnesses) {
      ++rep.actions_checked;
      if (w.player >= game.num_players() ||
          !std::binary_search(proj[w.player].begin(), proj[w.player].end(), w.action)) {
        bad(tag + "witness for an action outside the survivor set");
        continue;
      }
      try {
        w.sigma.validate(game.space());
      } catch (const Error&) {
        bad(tag + "invalid witness distribution");
        continue;
      }
      const auto c = certify_player(game, w.player, w.action, w.sigma, tol);
      if (!c || !(*c == w.certificate)) {
        bad(tag + "witness does not replay for player " + std::to_string(w.player) + " action " +
            std::to_string(w.action));
      }
    }
    if (!o.witnesses_truncated) {
      if (o.op == "gamma" && o.profile_witnesses.size() != o.survivors.size()) {
        bad(tag + "missing profile witnesses");
      }
      if (o.op != "gamma") {
        std::size_t total = 0;
        for (const auto& p : proj) total += p.size();
        if (o.action_witnesses.size() != total) bad(tag + "missing action witnesses");
      }
    }
    if (recompute) {
      SigmaSearchPolicy policy = SigmaSearchPolicy::from_config(b.spec.solver);
      IterateOptions opts;
      opts.op = parse_operator(o.op);
      opts.tol = tol;
      const FixedPointResult r = iterate_to_fixed(game, policy, b.spec.solver.max_rounds, opts);
      if (r.survivors.digest() != o.digest) bad(tag + "recomputed survivor set differs");
    }
  }
  return rep;
}

}  // namespace bnlab
