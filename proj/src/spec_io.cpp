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


#include "bnlab/spec_io.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bnlab/errors.hpp"
#include "bnlab/survivor.hpp"
#include "json_internal.hpp"

namespace bnlab {

namespace detail {

namespace {

Json grid_to_json(const Grid& g) {
  if (g.is_uniform()) return Json{{"min", g.lo()}, {"max", g.hi()}, {"count", g.size()}};
  return Json{{"points", g.points()}};
}

Grid grid_from_json(const Node& n) {
  n.object();
  if (n.has("points")) {
    n.only({"points"});
    return Grid::from_points(n.at("points").numbers());
  }
  n.only({"min", "max", "count"});
  const std::int64_t count = n.at("count").integer();
  if (count <= 0) fail(ErrorCode::kSchema, n.path() + ".count: must be positive");
  return Grid::uniform(n.at("min").number(), n.at("max").number(),
                       static_cast<std::size_t>(count));
}

Json cost_to_json(const CostSpec& c) {
  if (c.kind() == CostSpec::Kind::kQuadratic) {
    return Json{{"kind", "quadratic"}, {"coef", c.coef()}};
  }
  return Json{{"kind", "tabulated"}, {"knots", c.knots()}, {"marginal", c.marginal_values()}};
}

CostSpec cost_from_json(const Node& n) {
  const std::string kind = n.at("kind").str();
  if (kind == "quadratic") {
    n.only({"kind", "coef"});
    return CostSpec::quadratic(n.at("coef").number());
  }
  if (kind == "tabulated") {
    n.only({"kind", "knots", "marginal"});
    return CostSpec::tabulated(n.at("knots").numbers(), n.at("marginal").numbers());
  }
  fail(ErrorCode::kSchema, n.path() + ".kind: unknown cost kind '" + kind + "'");
}

Json interaction_to_json(const Interaction& g, const std::vector<PlayerSpec>& players) {
  switch (g.kind) {
    case Interaction::Kind::kOne:
      return Json{{"kind", "one"}};
    case Interaction::Kind::kAction:
      return Json{{"kind", "action"}, {"of", players.at(static_cast<std::size_t>(g.of)).name}};
    case Interaction::Kind::kClose:
      return Json{{"kind", "close"},
                  {"first", players.at(static_cast<std::size_t>(g.first)).name},
                  {"second", players.at(static_cast<std::size_t>(g.second)).name},
                  {"threshold", g.threshold}};
  }
  return Json{};
}

int player_ref(const Node& n, const std::map<std::string, int>& names) {
  if (n.raw().is_string()) {
    const auto it = names.find(n.str());
    if (it == names.end()) {
      fail(ErrorCode::kSchema, n.path() + ": references undefined player '" + n.str() + "'");
    }
    return it->second;
  }
  const std::int64_t k = n.integer();
  if (k < 0 || k >= static_cast<std::int64_t>(names.size())) {
    fail(ErrorCode::kSchema, n.path() + ": references undefined player");
  }
  return static_cast<int>(k);
}

Interaction interaction_from_json(const Node& n, const std::map<std::string, int>& names) {
  Interaction g;
  const std::string kind = n.at("kind").str();
  if (kind == "one") {
    n.only({"kind"});
  } else if (kind == "action") {
    n.only({"kind", "of"});
    g.kind = Interaction::Kind::kAction;
    g.of = player_ref(n.at("of"), names);
  } else if (kind == "close") {
    n.only({"kind", "first", "second", "threshold"});
    g.kind = Interaction::Kind::kClose;
    g.first = player_ref(n.at("first"), names);
    g.second = player_ref(n.at("second"), names);
    g.threshold = n.at("threshold").number();
  } else {
    fail(ErrorCode::kSchema, n.path() + ".kind: unknown interaction kind '" + kind + "'");
  }
  return g;
}

Json model_to_json(const ConsequenceModel& m, const std::vector<PlayerSpec>& players) {
  if (const auto* g = std::get_if<GaussianLinearModel>(&m)) {
    return Json{{"family", "gaussian_linear"},
                {"alpha", g->alpha},
                {"alpha_true", g->alpha_true},
                {"theta_true", g->theta_true},
                {"interaction", interaction_to_json(g->interaction, players)}};
  }
  const auto& t = std::get<TabularModel>(m);
  return Json{{"family", "tabular"},
              {"outcomes", t.outcomes},
              {"truth", t.truth},
              {"likelihoods", t.family}};
}

ConsequenceModel model_from_json(const Node& n, const std::map<std::string, int>& names) {
  const std::string family = n.at("family").str();
  if (family == "gaussian_linear") {
    n.only({"family", "alpha", "alpha_true", "theta_true", "interaction"});
    GaussianLinearModel g;
    g.alpha = n.at("alpha").number();
    g.alpha_true = n.at("alpha_true").number();
    g.theta_true = n.at("theta_true").number();
    g.interaction = interaction_from_json(n.at("interaction"), names);
    return g;
  }
  if (family == "tabular") {
    n.only({"family", "outcomes", "truth", "likelihoods"});
    TabularModel t;
    t.outcomes = n.at("outcomes").numbers();
    t.truth = n.at("truth").matrix();
    const Node fam = n.at("likelihoods");
    t.family.resize(fam.size());
    for (std::size_t k = 0; k < t.family.size(); ++k) t.family[k] = fam.at(k).matrix();
    return t;
  }
  fail(ErrorCode::kSchema, n.path() + ".family: unknown model family '" + family + "'");
}

Json payoff_to_json(const PayoffSpec& p) {
  if (p.kind == PayoffSpec::Kind::kTable) return Json{{"kind", "table"}, {"table", p.table}};
  return Json{{"kind", "outcome_minus_cost"}, {"cost", cost_to_json(p.cost)}};
}

PayoffSpec payoff_from_json(const Node& n) {
  PayoffSpec p;
  const std::string kind = n.at("kind").str();
  if (kind == "outcome_minus_cost") {
    n.only({"kind", "cost"});
    p.cost = cost_from_json(n.at("cost"));
  } else if (kind == "table") {
    n.only({"kind", "table"});
    p.kind = PayoffSpec::Kind::kTable;
    p.table = n.at("table").matrix();
  } else {
    fail(ErrorCode::kSchema, n.path() + ".kind: unknown payoff kind '" + kind + "'");
  }
  return p;
}

Json solver_to_json(const SolverConfig& s) {
  return Json{{"policy", s.policy},   {"mesh", s.mesh},
              {"max_support", s.max_support}, {"samples", s.samples},
              {"seed", s.seed},       {"max_rounds", s.max_rounds},
              {"tol", s.tol}};
}

SolverConfig solver_from_json(const Node& n) {
  n.only({"policy", "mesh", "max_support", "samples", "seed", "max_rounds", "tol"});
  SolverConfig s;
  if (n.has("policy")) s.policy = n.at("policy").str();
  if (n.has("mesh")) s.mesh = n.at("mesh").int32();
  if (n.has("max_support")) s.max_support = n.at("max_support").int32();
  if (n.has("samples")) s.samples = n.at("samples").int32();
  if (n.has("seed")) s.seed = n.at("seed").unsigned_integer();
  if (n.has("max_rounds")) s.max_rounds = n.at("max_rounds").int32();
  if (n.has("tol")) s.tol = n.at("tol").number();
  return s;
}

Json simulation_to_json(const SimulationConfig& s) {
  Json j{{"horizon", s.horizon}, {"replications", s.replications}, {"seed", s.seed},
         {"thin", s.thin},       {"window", s.window},             {"eps", s.eps},
         {"alpha0", s.alpha0}};
  if (s.logit_lambda) j["logit_lambda"] = *s.logit_lambda;
  if (s.param_grid) j["param_grid"] = grid_to_json(*s.param_grid);
  return j;
}

SimulationConfig simulation_from_json(const Node& n) {
  n.only({"horizon", "replications", "seed", "thin", "window", "eps", "alpha0", "logit_lambda",
          "param_grid"});
  SimulationConfig s;
  if (n.has("horizon")) s.horizon = n.at("horizon").int32();
  if (n.has("replications")) s.replications = n.at("replications").int32();
  if (n.has("seed")) s.seed = n.at("seed").unsigned_integer();
  if (n.has("thin")) s.thin = n.at("thin").int32();
  if (n.has("window")) s.window = n.at("window").number();
  if (n.has("eps")) s.eps = n.at("eps").number();
  if (n.has("alpha0")) s.alpha0 = n.at("alpha0").number();
  if (n.has("logit_lambda")) s.logit_lambda = n.at("logit_lambda").number();
  if (n.has("param_grid")) s.param_grid = grid_from_json(n.at("param_grid"));
  return s;
}

}  // namespace

Json spec_to_json(const GameSpec& spec) {
  Json players = Json::array();
  for (const auto& p : spec.players) {
    players.push_back(Json{{"name", p.name},
                           {"actions", grid_to_json(p.actions)},
                           {"params", grid_to_json(p.params)},
                           {"model", model_to_json(p.model, spec.players)},
                           {"payoff", payoff_to_json(p.payoff)}});
  }
  return Json{{"version", spec.version},
              {"name", spec.name},
              {"players", players},
              {"solver", solver_to_json(spec.solver)},
              {"simulation", simulation_to_json(spec.simulation)}};
}

GameSpec spec_from_json(const Json& j) {
  const Node root(j, "spec");
  root.only({"version", "name", "players", "solver", "simulation"});
  GameSpec spec;
  spec.version = root.at("version").int32();
  if (spec.version != kSpecVersion) {
    fail(ErrorCode::kSchema, "spec.version: unsupported version " + std::to_string(spec.version));
  }
  if (root.has("name")) spec.name = root.at("name").str();
  const Node players = root.at("players");
  if (players.size() == 0) fail(ErrorCode::kSchema, "spec.players: no players defined");
  std::map<std::string, int> names;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string name = players.at(i).at("name").str();
    if (name.empty()) fail(ErrorCode::kSchema, players.at(i).path() + ".name: must be nonempty");
    if (!names.emplace(name, static_cast<int>(i)).second) {
      fail(ErrorCode::kSchema, players.at(i).path() + ".name: duplicate player '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < players.size(); ++i) {
    const Node p = players.at(i);
    p.only({"name", "actions", "params", "model", "payoff"});
    PlayerSpec ps;
    ps.name = p.at("name").str();
    ps.actions = grid_from_json(p.at("actions"));
    ps.params = grid_from_json(p.at("params"));
    ps.model = model_from_json(p.at("model"), names);
    ps.payoff = payoff_from_json(p.at("payoff"));
    spec.players.push_back(std::move(ps));
  }
  if (root.has("solver")) spec.solver = solver_from_json(root.at("solver"));
  if (root.has("simulation")) spec.simulation = simulation_from_json(root.at("simulation"));
  return spec;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kSchema, what + ": " + e.what());
  }
}

}  // namespace detail

GameSpec parse_spec(const std::string& text) {
  try {
    return detail::spec_from_json(detail::parse_json(text, "spec"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) fail(ErrorCode::kSchema, e.what());
    throw;
  } catch (const detail::Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("spec: ") + e.what());
  }
}

GameSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

std::string emit_spec(const GameSpec& spec) { return detail::spec_to_json(spec).dump(2) + "\n"; }

std::string canonical_spec(const GameSpec& spec) { return detail::spec_to_json(spec).dump(); }

std::string spec_hash(const GameSpec& spec) { return sha256_hex(canonical_spec(spec)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "read error on " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(ErrorCode::kIo, "write error on " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::kIo, "cannot rename onto " + path);
  }
}

}  // namespace bnlab
