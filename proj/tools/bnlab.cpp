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


// bnlab command-line frontend: solve, simulate, example, verify.

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bnlab/analytic.hpp"
#include "bnlab/bundle.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/learning.hpp"
#include "bnlab/mixed.hpp"
#include "bnlab/solver.hpp"
#include "bnlab/spec_io.hpp"

namespace {

using namespace bnlab;

enum Exit {
  kOk = 0,
  kIoError = 1,
  kUsage = 2,
  kSchemaError = 3,
  kNotConverged = 4,
  kEmpty = 5,
  kVerifyFailed = 6,
  kUnknownExample = 7,
  kUnidentified = 8,
  kDegenerate = 9,
  kInvalid = 10,
  kNonFinite = 11,
  kNotCsi = 12,
  kInternal = 13,
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::kSchema:
      return kSchemaError;
    case ErrorCode::kInvalidArgument:
      return kInvalid;
    case ErrorCode::kNonFiniteKL:
      return kNonFinite;
    case ErrorCode::kEmptySurvivorSet:
      return kEmpty;
    case ErrorCode::kNotConverged:
      return kNotConverged;
    case ErrorCode::kUnidentifiedModel:
      return kUnidentified;
    case ErrorCode::kDegenerateLikelihood:
      return kDegenerate;
    case ErrorCode::kNotCorrectlySpecified:
      return kNotCsi;
    case ErrorCode::kUnknownExample:
      return kUnknownExample;
    case ErrorCode::kVerificationFailed:
      return kVerifyFailed;
    case ErrorCode::kIo:
      return kIoError;
  }
  return kInternal;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// Flags shared by solve and simulate that override the spec document.
struct Overrides {
  std::optional<std::string> policy;
  std::optional<int> mesh;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_rounds;
  std::optional<double> grid_step;
  std::optional<int> horizon;
  std::optional<int> reps;
  std::optional<double> eps;
  std::optional<int> thin;
  std::optional<double> window;
  std::optional<double> alpha0;
  std::optional<double> logit;
};

void regrid(GameSpec& spec, double step) {
  if (!(step > 0.0)) fail(ErrorCode::kInvalidArgument, "--grid-step must be positive");
  for (auto& p : spec.players) {
    if (!std::holds_alternative<GaussianLinearModel>(p.model)) {
      fail(ErrorCode::kInvalidArgument, "--grid-step needs linear-Gaussian players");
    }
    if (!p.actions.is_uniform()) {
      fail(ErrorCode::kInvalidArgument, "--grid-step needs uniform action grids");
    }
    const double span = p.actions.hi() - p.actions.lo();
    const auto count = static_cast<std::size_t>(std::llround(span / step)) + 1;
    p.actions = Grid::uniform(p.actions.lo(), p.actions.hi(), std::max<std::size_t>(count, 2));
  }
}

void apply(const Overrides& o, GameSpec& spec) {
  if (o.policy) spec.solver.policy = *o.policy;
  if (o.mesh) spec.solver.mesh = *o.mesh;
  if (o.seed) {
    spec.solver.seed = *o.seed;
    spec.simulation.seed = *o.seed;
  }
  if (o.tol) spec.solver.tol = *o.tol;
  if (o.max_rounds) spec.solver.max_rounds = *o.max_rounds;
  if (o.grid_step) regrid(spec, *o.grid_step);
  if (o.horizon) spec.simulation.horizon = *o.horizon;
  if (o.reps) spec.simulation.replications = *o.reps;
  if (o.eps) spec.simulation.eps = *o.eps;
  if (o.thin) spec.simulation.thin = *o.thin;
  if (o.window) spec.simulation.window = *o.window;
  if (o.alpha0) spec.simulation.alpha0 = *o.alpha0;
  if (o.logit) spec.simulation.logit_lambda = *o.logit;
}

void add_solver_flags(CLI::App* app, Overrides& o) {
  app->add_option("--policy", o.policy, "sigma search: auto|exact_lp|simplex_grid|dirichlet|structured");
  app->add_option("--mesh", o.mesh, "simplex grid divisions");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--tol", o.tol, "best-response and KL tie tolerance");
  app->add_option("--max-rounds", o.max_rounds, "iteration cap");
  app->add_option("--grid-step", o.grid_step, "regrid uniform action grids to this step");
}

std::vector<std::string> split_ops(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "all") {
      out.insert(out.end(), {"gamma", "bp", "weak"});
    } else if (!tok.empty()) {
      out.push_back(tok);
    }
  }
  return out;
}

OperatorRun run_operator(const Game& game, const GameSpec& spec, const std::string& op) {
  const SigmaSearchPolicy policy = SigmaSearchPolicy::from_config(spec.solver);
  IterateOptions opts;
  opts.op = parse_operator(op);
  opts.tol = spec.solver.tol;
  const auto t0 = Clock::now();
  const FixedPointResult r = iterate_to_fixed(game, policy, spec.solver.max_rounds, opts);
  return make_operator_run(r, policy, game, ms_since(t0));
}

MixedRun run_mixed(const Game& game, const GameSpec& spec, const std::vector<double>& lambdas) {
  MixedRun m;
  m.lambdas = lambdas;
  m.mesh = spec.solver.mesh;
  const MixedIterateResult r = anneal(game, simplex_mesh_cloud(game, spec.solver.mesh + 1), lambdas,
                                      200, 1e-8, spec.solver.tol);
  m.rounds = r.rounds;
  m.converged = r.converged;
  m.last_change = r.last_change;
  m.cloud = dedupe(r.cloud, 1e-6);
  return m;
}

int cmd_solve(const std::string& spec_path, const std::string& ops_flag, const Overrides& ov,
              const std::vector<double>& lambdas, const std::string& out,
              const std::string& csv) {
  const auto t0 = Clock::now();
  GameSpec spec = load_spec(spec_path);
  ResultBundle b;
  b.version = tool_version();
  b.input_spec_hash = spec_hash(spec);
  apply(ov, spec);
  b.spec_hash = spec_hash(spec);
  b.spec = spec;
  const Game game(spec);
  b.timings_ms.emplace_back("setup", ms_since(t0));
  bool converged = true;
  const auto ops = split_ops(ops_flag);
  if (ops.empty()) fail(ErrorCode::kInvalidArgument, "--operator names no operator");
  for (const auto& op : ops) {
    const auto t1 = Clock::now();
    if (op == "mixed") {
      b.mixed = run_mixed(game, spec, lambdas);
      converged = converged && b.mixed->converged;
    } else {
      b.operators.push_back(run_operator(game, spec, op));
      converged = converged && b.operators.back().converged;
    }
    b.timings_ms.emplace_back(op, ms_since(t1));
  }
  b.timings_ms.emplace_back("total", ms_since(t0));
  write_file_atomic(out, bundle_to_json(b));
  if (!csv.empty()) write_file_atomic(csv, bundle_summary_csv(b));
  for (const auto& o : b.operators) {
    std::cerr << o.op << ": " << o.survivors.size() << " survivors after " << o.history.size()
              << " rounds (" << o.policy << ")\n";
  }
  if (!converged) {
    std::cerr << "error: NotConverged: iteration cap reached before a fixed point\n";
    return kNotConverged;
  }
  return kOk;
}

// Hash of the parts of a spec that determine survivor sets.
std::string solve_hash(GameSpec spec) {
  spec.simulation = SimulationConfig{};
  return spec_hash(spec);
}

ForcedPlay read_replay(const std::string& path) {
  ForcedPlay f;
  std::stringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::size_t> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      std::size_t v = 0;
      const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
        fail(ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": expected action indices");
      }
      row.push_back(v);
    }
    f.periods.push_back(std::move(row));
  }
  return f;
}

std::string trace_csv(const Game& game, const LearningTrace& tr, int thin) {
  const std::size_t n = game.num_players();
  std::string s = "t";
  for (const char* pre : {"a_", "y_", "theta_"}) {
    for (std::size_t i = 0; i < n; ++i) s += std::string(",") + pre + game.player(i).name;
  }
  s += "\n";
  std::vector<std::size_t> c(n);
  for (std::size_t t = 1; t <= tr.length(); ++t) {
    if (t % static_cast<std::size_t>(thin) != 0 && t != 1 && t != tr.length()) continue;
    game.space().decode(tr.profiles[t - 1], c.data());
    s += std::to_string(t);
    for (std::size_t i = 0; i < n; ++i) s += "," + fmt(game.action_value(i, c[i]));
    for (std::size_t i = 0; i < n; ++i) s += "," + fmt(tr.outcomes[(t - 1) * n + i]);
    for (std::size_t i = 0; i < n; ++i) s += "," + fmt(tr.posterior_means[(t - 1) * n + i]);
    s += "\n";
  }
  return s;
}

int cmd_simulate(const std::string& spec_path, const Overrides& ov, const std::string& op,
                 const std::string& survivors_path, const std::string& replay_path,
                 const std::string& out_dir) {
  const auto t0 = Clock::now();
  GameSpec spec = load_spec(spec_path);
  ResultBundle b;
  b.version = tool_version();
  b.input_spec_hash = spec_hash(spec);
  apply(ov, spec);
  b.spec_hash = spec_hash(spec);
  b.spec = spec;
  const Game game(spec);
  const RunConfig cfg = RunConfig::from(spec.simulation);
  std::optional<ForcedPlay> forced;
  if (!replay_path.empty()) forced = read_replay(replay_path);

  OperatorRun run;
  if (!survivors_path.empty()) {
    const ResultBundle src = parse_bundle(read_file(survivors_path));
    if (solve_hash(src.spec) != solve_hash(spec)) {
      fail(ErrorCode::kVerificationFailed, "survivor bundle was computed for a different spec");
    }
    bool found = false;
    for (const auto& o : src.operators) {
      if (o.op == op) {
        run = o;
        found = true;
      }
    }
    if (!found) fail(ErrorCode::kInvalidArgument, "survivor bundle has no " + op + " result");
  } else {
    run = run_operator(game, spec, op);
  }
  SurvivorSet survivors(game.space());
  for (ProfileIndex p : run.survivors) survivors.insert(p);
  b.timings_ms.emplace_back("solve", ms_since(t0));

  const auto t1 = Clock::now();
  const auto traces = run_replications(game, cfg, forced ? &*forced : nullptr);
  b.timings_ms.emplace_back("simulate", ms_since(t1));
  SimulationSummary sum;
  sum.horizon = cfg.horizon;
  sum.replications = cfg.replications;
  sum.seed = cfg.seed;
  sum.thin = cfg.thin;
  sum.survivor_operator = op;
  sum.containment = containment_report(game, traces, survivors, cfg.eps, cfg.window);
  b.simulation = sum;
  b.operators.push_back(std::move(run));
  b.timings_ms.emplace_back("total", ms_since(t0));

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& tr : traces) {
    char name[48];
    std::snprintf(name, sizeof(name), "trace_rep%04d.csv", tr.replication);
    files.emplace_back(name, trace_csv(game, tr, cfg.thin));
  }
  files.emplace_back("summary.json", bundle_to_json(b));
  std::string csv = "replication,limit_points,inside_fraction,window_mass,max_distance,pass\n";
  for (const auto& t : sum.containment.traces) {
    csv += std::to_string(t.replication) + "," + std::to_string(t.limit_points.size()) + "," +
           fmt(t.inside_fraction) + "," + fmt(t.window_mass) + "," + fmt(t.max_distance) + "," +
           (t.pass ? "1" : "0") + "\n";
  }
  files.emplace_back("containment.csv", csv);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + out_dir);
  for (const auto& [name, data] : files) {
    write_file_atomic((std::filesystem::path(out_dir) / name).string(), data);
  }
  std::cerr << "containment pass rate " << sum.containment.pass_rate << " over "
            << traces.size() << " replications (eps " << cfg.eps << ")\n";
  return kOk;
}

struct ExampleParams {
  std::optional<double> alpha;
  std::optional<double> alpha_true;
  std::optional<double> theta_true;
  std::optional<double> threshold;
  std::optional<double> cost_coef;
  std::optional<double> grid_step;
  std::optional<std::size_t> theta_points;
  int points = 401;
};

template <typename Ex>
void override_common(Ex& ex, const ExampleParams& p) {
  if (p.alpha) ex.alpha = *p.alpha;
  if (p.alpha_true) ex.alpha_true = *p.alpha_true;
  if (p.theta_true) ex.theta_true = *p.theta_true;
  if (p.cost_coef) ex.cost = CostSpec::quadratic(*p.cost_coef);
}

int cmd_example(const std::string& name, const ExampleParams& p, const std::string& out,
                const std::string& spec_out) {
  ExampleGrid grid = default_example_grid(name);
  if (p.grid_step) grid.action_step = *p.grid_step;
  if (p.theta_points) grid.theta_points = *p.theta_points;
  std::vector<PlotRow> rows;
  GameSpec spec;
  if (name == "effort-over" || name == "effort-over-quadratic" || name == "effort-under") {
    EffortExample ex = name == "effort-over"             ? effort_over_multi()
                       : name == "effort-over-quadratic" ? effort_over_quadratic()
                                                         : effort_under();
    if (p.threshold) fail(ErrorCode::kInvalidArgument, "--threshold applies to team examples");
    override_common(ex, p);
    rows = effort_plot(ex, p.points);
    if (!spec_out.empty()) spec = effort_spec(ex, grid, name);
  } else if (name == "team" || name == "team-csi") {
    TeamExample ex = name == "team" ? team_misspecified() : team_csi();
    override_common(ex, p);
    if (p.threshold) ex.threshold = *p.threshold;
    rows = team_plot(ex, p.points);
    if (!spec_out.empty()) spec = team_spec(ex, grid, name);
  } else {
    fail(ErrorCode::kUnknownExample, "unknown example '" + name + "'");
  }
  std::string csv = "kind,a,theta_m,marginal_cost,label\n";
  for (const auto& r : rows) {
    csv += r.kind + "," + fmt(r.a) + "," + fmt(r.theta_m) + "," + fmt(r.marginal_cost) + "," +
           r.label + "\n";
  }
  write_file_atomic(out, csv);
  if (!spec_out.empty()) write_file_atomic(spec_out, emit_spec(spec));
  return kOk;
}

int cmd_verify(const std::string& path, bool recompute) {
  const ResultBundle b = parse_bundle(read_file(path));
  const VerifyReport r = verify_bundle(b, recompute);
  std::cerr << "checked " << r.profiles_checked << " profile witnesses, " << r.actions_checked
            << " action witnesses\n";
  if (!r.ok) {
    for (const auto& f : r.failures) std::cerr << "error: VerificationFailed: " << f << "\n";
    return kVerifyFailed;
  }
  std::cerr << "bundle verified\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berk-Nash rationalizability solver and learning simulator"};
  app.set_version_flag("--version", std::string(bnlab::tool_version()));
  app.require_subcommand(1);

  Overrides ov;
  std::string spec_path, out, csv, ops = "gamma";
  std::vector<double> lambdas{1.0, 0.3, 0.1, 0.03, 0.01};
  auto* solve = app.add_subcommand("solve", "iterate an operator to its largest fixed point");
  solve->add_option("--spec", spec_path, "spec document")->required();
  solve->add_option("--operator", ops, "gamma|bp|weak|mixed|all, comma separated");
  solve->add_option("--lambda", lambdas, "logit lambdas for the mixed operator, annealed in order");
  solve->add_option("--out", out, "result bundle path")->required();
  solve->add_option("--csv", csv, "optional round summary CSV path");
  add_solver_flags(solve, ov);

  std::string sim_op = "gamma", survivors_path, replay_path;
  auto* sim = app.add_subcommand("simulate", "run myopic learners and check containment");
  sim->add_option("--spec", spec_path, "spec document")->required();
  sim->add_option("--operator", sim_op, "survivor set to check against: gamma|bp|weak");
  sim->add_option("--survivors", survivors_path, "reuse survivors from a solve bundle");
  sim->add_option("--replay", replay_path, "forced action indices per period (CSV)");
  sim->add_option("--horizon", ov.horizon, "periods per replication");
  sim->add_option("--reps", ov.reps, "replications");
  sim->add_option("--eps", ov.eps, "containment tolerance in action units");
  sim->add_option("--thin", ov.thin, "trace row and snapshot spacing");
  sim->add_option("--window", ov.window, "final fraction of periods used for limit points");
  sim->add_option("--alpha0", ov.alpha0, "forecast prior strength");
  sim->add_option("--logit", ov.logit, "logit choice perturbation lambda");
  sim->add_option("--out", out, "output directory")->required();
  add_solver_flags(sim, ov);

  std::string name, spec_out;
  ExampleParams ep;
  auto* ex = app.add_subcommand("example", "emit plot data for a named example");
  ex->add_option("name", name, "effort-over|effort-over-quadratic|effort-under|team|team-csi")
      ->required();
  ex->add_option("--alpha", ep.alpha, "model ability");
  ex->add_option("--alpha-true", ep.alpha_true, "true ability");
  ex->add_option("--theta-true", ep.theta_true, "true return to effort");
  ex->add_option("--threshold", ep.threshold, "team closeness threshold");
  ex->add_option("--cost-coef", ep.cost_coef, "quadratic cost coefficient");
  ex->add_option("--points", ep.points, "curve points");
  ex->add_option("--grid-step", ep.grid_step, "action grid step for --spec-out");
  ex->add_option("--theta-points", ep.theta_points, "parameter grid size for --spec-out");
  ex->add_option("--out", out, "plot CSV path")->required();
  ex->add_option("--spec-out", spec_out, "also write the example's spec document");

  std::string bundle_path;
  bool recompute = false;
  auto* ver = app.add_subcommand("verify", "re-check a bundle's witnesses");
  ver->add_option("bundle", bundle_path, "result bundle")->required();
  ver->add_flag("--recompute", recompute, "also rerun each operator and compare survivor masks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    if (*solve) return cmd_solve(spec_path, ops, ov, lambdas, out, csv);
    if (*sim) return cmd_simulate(spec_path, ov, sim_op, survivors_path, replay_path, out);
    if (*ex) return cmd_example(name, ep, out, spec_out);
    if (*ver) return cmd_verify(bundle_path, recompute);
  } catch (const bnlab::Error& e) {
    std::cerr << "error: " << bnlab::error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
