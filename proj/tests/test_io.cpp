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


#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "bnlab/analytic.hpp"
#include "bnlab/bundle.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/spec_io.hpp"
#include "test_util.hpp"

namespace bnlab {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::vector<GameSpec> sample_specs() {
  std::vector<GameSpec> out;
  for (const auto& name : example_names()) out.push_back(example_spec(name, default_example_grid(name)));
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    testing::RandomGameOptions o;
    o.players = 2 + static_cast<std::size_t>(k % 3 == 0);
    o.max_actions = 3;
    o.csi = k % 2 == 0;
    out.push_back(testing::random_tabular_spec(rng, o));
  }
  GameSpec odd = out[0];
  odd.players[0].params = Grid::from_points({0.1, 0.35, 0.9, 1.7});
  odd.simulation.logit_lambda = 0.1;
  odd.simulation.param_grid = Grid::uniform(0.0, 2.0, 11);
  odd.solver.seed = 0xfedcba9876543210ull;
  odd.solver.tol = 1.0 / 3.0;
  out.push_back(odd);
  return out;
}

TEST(SpecIo, RoundTripIsLossless) {
  for (const auto& s : sample_specs()) {
    const std::string text = emit_spec(s);
    const GameSpec back = parse_spec(text);
    EXPECT_EQ(back, s) << s.name;
    EXPECT_EQ(emit_spec(back), text);
    EXPECT_EQ(spec_hash(back), spec_hash(s));
    EXPECT_EQ(spec_hash(s).size(), 64u);
  }
}

TEST(SpecIo, HashSeparatesSpecs) {
  GameSpec a = example_spec("team", default_example_grid("team"));
  GameSpec b = a;
  b.players[0].model = [] {
    GaussianLinearModel m;
    m.alpha = 2.0000000000000004;
    return m;
  }();
  EXPECT_NE(spec_hash(a), spec_hash(b));
}

TEST(SpecIo, SchemaErrors) {
  const std::string good = emit_spec(example_spec("team-csi", default_example_grid("team-csi")));
  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    s.replace(pos, from.size(), to);
    return s;
  };
  EXPECT_EQ(code_of([&] { parse_spec("{"); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec("[]"); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"version\": 1", "\"version\": 2")); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"actions\"", "\"actionz\"")); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"of\": \"manager\"", "\"of\": \"boss\"")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"count\": 201", "\"count\": \"101\"")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"count\": 201", "\"count\": 0")); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"name\": \"worker2\"", "\"name\": \"worker1\"")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"coef\": 1.0", "\"coef\": -1.0")); }), ErrorCode::kSchema);
  EXPECT_EQ(code_of([&] { parse_spec(mutate("\"family\": \"gaussian_linear\"", "\"family\": \"poisson\"")); }),
            ErrorCode::kSchema);
  // A spec that parses but names an invalid game.
  EXPECT_EQ(code_of([&] { Game g(parse_spec(mutate("\"alpha\": 1.0", "\"alpha\": -1.0"))); }),
            ErrorCode::kSchema);
}

TEST(SpecIo, FilesAreWrittenAtomically) {
  const auto dir = std::filesystem::temp_directory_path() / "bnlab_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.json").string();
  write_file_atomic(path, "hello");
  write_file_atomic(path, "world");
  EXPECT_EQ(read_file(path), "world");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), {}), 1);
  EXPECT_EQ(code_of([&] { read_file((dir / "missing").string()); }), ErrorCode::kIo);
  EXPECT_EQ(code_of([&] { write_file_atomic((dir / "no" / "such").string(), "x"); }), ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}

ResultBundle solved_bundle(const GameSpec& spec) {
  const Game game(spec);
  ResultBundle b;
  b.version = tool_version();
  b.spec = spec;
  b.spec_hash = b.input_spec_hash = spec_hash(spec);
  const SigmaSearchPolicy policy = SigmaSearchPolicy::from_config(spec.solver);
  for (Operator op : {Operator::kGamma, Operator::kBernheimPearce, Operator::kWeak}) {
    IterateOptions o;
    o.op = op;
    b.operators.push_back(make_operator_run(iterate_to_fixed(game, policy, 100, o), policy, game, 1.5));
  }
  b.timings_ms = {{"total", 3.0}};
  return b;
}

TEST(Bundle, RoundTripAndVerify) {
  std::mt19937_64 rng(5);
  for (const GameSpec& spec : {example_spec("effort-under", ExampleGrid{}), testing::random_tabular_spec(rng)}) {
    const ResultBundle b = solved_bundle(spec);
    const ResultBundle back = parse_bundle(bundle_to_json(b));
    EXPECT_EQ(bundle_fingerprint(back), bundle_fingerprint(b));
    EXPECT_EQ(bundle_to_json(back), bundle_to_json(b));
    const VerifyReport r = verify_bundle(back, true);
    EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_GT(r.profiles_checked, 0u);
    EXPECT_GT(r.actions_checked, 0u);
    const std::string csv = bundle_summary_csv(b);
    EXPECT_EQ(csv.substr(0, 34), "operator,policy,round,survivors,wa");
  }
}

TEST(Bundle, FingerprintIgnoresTimings) {
  const ResultBundle a = solved_bundle(example_spec("effort-over-quadratic", ExampleGrid{}));
  ResultBundle b = a;
  b.timings_ms = {{"total", 99.0}};
  b.operators[0].total_ms = 42.0;
  b.operators[0].history[0].wall_ms = 7.0;
  EXPECT_EQ(bundle_fingerprint(a), bundle_fingerprint(b));
  EXPECT_NE(bundle_to_json(a), bundle_to_json(b));
}

TEST(Bundle, VerifyDetectsTampering) {
  const ResultBundle b = solved_bundle(example_spec("effort-under", ExampleGrid{}));
  {
    ResultBundle t = b;
    t.operators[0].profile_witnesses[0].certificate.players[0].margin += 1e-17 + 1e-12;
    EXPECT_FALSE(verify_bundle(t).ok);
  }
  {
    ResultBundle t = b;
    t.operators[0].survivors.pop_back();
    EXPECT_FALSE(verify_bundle(t).ok);
  }
  {
    ResultBundle t = b;
    std::get<GaussianLinearModel>(t.spec.players[0].model).alpha = 0.6;
    EXPECT_FALSE(verify_bundle(t).ok);
  }
  {
    ResultBundle t = b;
    t.operators[1].action_witnesses[0].sigma.weights[0] = 0.5;
    EXPECT_FALSE(verify_bundle(t).ok);
  }
  {
    ResultBundle t = b;
    const ProfileIndex last = t.operators[0].survivors.back();
    t.operators[0].survivors.push_back(last + 1);
    SurvivorSet s(Game(t.spec).space());
    for (ProfileIndex p : t.operators[0].survivors) s.insert(p);
    t.operators[0].digest = s.digest();
    EXPECT_FALSE(verify_bundle(t, true).ok);
  }
  EXPECT_EQ(code_of([] { parse_bundle("{\"version\": 1}"); }), ErrorCode::kSchema);
}

}  // namespace
}  // namespace bnlab
