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


#ifndef BNLAB_BUNDLE_HPP_
#define BNLAB_BUNDLE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/learning.hpp"
#include "bnlab/mixed.hpp"
#include "bnlab/solver.hpp"

namespace bnlab {

const char* tool_version();

struct OperatorRun {
  std::string op;
  std::string policy;
  bool converged = false;
  std::vector<ProfileIndex> survivors;  // sorted
  std::string digest;
  std::vector<RoundRecord> history;
  std::vector<ProfileWitness> profile_witnesses;
  std::vector<ActionWitness> action_witnesses;
  bool witnesses_truncated = false;
  std::uint64_t uncertified_dropped = 0;
  double total_ms = 0.0;
};

OperatorRun make_operator_run(const FixedPointResult& r,
                              const SigmaSearchPolicy& policy,
                              const Game& game, double total_ms);

struct MixedRun {
  std::vector<double> lambdas;
  int mesh = 0;
  int rounds = 0;
  bool converged = false;
  double last_change = 0.0;
  MixedProfileCloud cloud;  // deduplicated
};

struct SimulationSummary {
  int horizon = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  int thin = 0;
  std::string survivor_operator;
  ContainmentReport containment;
};

struct ResultBundle {
  std::string version;
  // Hash of the embedded spec, and of the input document before flag
  // overrides were applied.
  std::string spec_hash;
  std::string input_spec_hash;
  GameSpec spec;
  std::vector<OperatorRun> operators;
  std::optional<MixedRun> mixed;
  std::optional<SimulationSummary> simulation;
  std::vector<std::pair<std::string, double>> timings_ms;
};

std::string bundle_to_json(const ResultBundle& b);
ResultBundle parse_bundle(const std::string& text);
// One row per operator round: operator, round, survivors, wall_ms and the
// per-player survivor box.
std::string bundle_summary_csv(const ResultBundle& b);

// Canonical text with timing fields removed.
std::string bundle_fingerprint(const ResultBundle& b);

struct VerifyReport {
  bool ok = true;
  std::size_t profiles_checked = 0;
  std::size_t actions_checked = 0;
  std::vector<std::string> failures;
};

// Checks the spec hash, survivor digests and every witness certificate
// bitwise; with recompute, also reruns each operator and compares masks.
VerifyReport verify_bundle(const ResultBundle& b, bool recompute = false);

}  // namespace bnlab

#endif  // BNLAB_BUNDLE_HPP_
