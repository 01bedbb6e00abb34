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

#ifndef BNLAB_SOLVER_HPP_
#define BNLAB_SOLVER_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/mixture.hpp"
#include "bnlab/model_core.hpp"
#include "bnlab/survivor.hpp"

namespace bnlab {

// How the existential "some sigma in Delta(A)" is searched. Every policy also
// tries all point masses. Survival is always certified; elimination is only
// as complete as the search.
struct SigmaSearchPolicy {
  enum class Kind {
    kAuto,
    kExactLP,
    kSimplexGrid,
    kDirichletSample,
    kStructuredMoments,
  };
  Kind kind = Kind::kAuto;
  int mesh = 10;
  int max_support = 3;
  int samples = 2000;
  std::uint64_t seed = 1;

  static SigmaSearchPolicy from_config(const SolverConfig& cfg);
  static Kind parse_kind(const std::string& name);
  static const char* kind_name(Kind kind);
  void validate() const;
  // kAuto becomes kStructuredMoments for linear-Gaussian games and kExactLP
  // otherwise.
  Kind resolve(const Game& game) const;
};

enum class Operator { kGamma, kBernheimPearce, kWeak };
const char* operator_name(Operator op);
Operator parse_operator(const std::string& name);

struct ApplyOptions {
  double tol = kDefaultTol;
  bool record_witnesses = false;
  // When set, only members of this set are reported.
  const SurvivorSet* restrict_to = nullptr;
};

struct ApplyResult {
  SurvivorSet survivors;
  // witness_of[k] pairs a surviving profile with an index into sigmas.
  std::vector<std::pair<ProfileIndex, std::uint32_t>> witness_of;
  std::vector<ProfileMixture> sigmas;
};

// Per-player sets W^i(A) of actions justified by some sigma in Delta(A).
struct PlayerJustification {
  std::vector<std::vector<std::size_t>> actions;
  // witness[i][k] is the sigma index that justified actions[i][k].
  std::vector<std::vector<std::uint32_t>> witness;
  std::vector<ProfileMixture> sigmas;
};

SurvivorSet gamma_apply(const Game& game, const SurvivorSet& a,
                        const SigmaSearchPolicy& policy,
                        double tol = kDefaultTol);
ApplyResult gamma_apply_detailed(const Game& game, const SurvivorSet& a,
                                 const SigmaSearchPolicy& policy,
                                 const ApplyOptions& opts);

PlayerJustification player_justification(const Game& game,
                                         const SurvivorSet& a,
                                         const SigmaSearchPolicy& policy,
                                         double tol = kDefaultTol);
// A intersected with the product of the W^i(A).
SurvivorSet gamma_weak_apply(const Game& game, const SurvivorSet& a,
                             const SigmaSearchPolicy& policy,
                             double tol = kDefaultTol);
// Product of the W^i(A); A must be a product set.
SurvivorSet gamma_bp_apply(const Game& game, const SurvivorSet& a,
                           const SigmaSearchPolicy& policy,
                           double tol = kDefaultTol);

struct RoundRecord {
  int round = 0;
  std::uint64_t survivors = 0;
  double wall_ms = 0.0;
  // Per-player [min, max] action value among survivors.
  std::vector<std::pair<double, double>> box;
};

struct ProfileWitness {
  ProfileIndex profile = 0;
  ProfileMixture sigma;
  Certificate certificate;
};

struct ActionWitness {
  std::size_t player = 0;
  std::size_t action = 0;
  ProfileMixture sigma;
  PlayerCertificate certificate;
};

struct FixedPointResult {
  Operator op = Operator::kGamma;
  SurvivorSet survivors;
  std::vector<RoundRecord> history;
  bool converged = false;
  // Gamma: one witness per survivor (up to a cap). Weak and BP: one per
  // surviving player action.
  std::vector<ProfileWitness> profile_witnesses;
  std::vector<ActionWitness> action_witnesses;
  bool witnesses_truncated = false;
  // Members dropped because their search hit could not be certified.
  std::uint64_t uncertified_dropped = 0;
};

struct IterateOptions {
  Operator op = Operator::kGamma;
  double tol = kDefaultTol;
  std::size_t witness_cap = 100000;
};

FixedPointResult iterate_to_fixed(const Game& game,
                                  const SigmaSearchPolicy& policy,
                                  int max_rounds,
                                  const IterateOptions& opts = {});

// a in Gamma({a}).
bool bne_check(const Game& game, ProfileIndex profile,
               double tol = kDefaultTol);

// Every support profile of candidate is justified by some sigma in Delta(B).
bool phi_apply(const Game& game, const ProfileMixture& candidate,
               const SurvivorSet& b, const SigmaSearchPolicy& policy,
               double tol = kDefaultTol);

// Interval outer bounds on the Gaussian moments over Delta(A), per player:
// the range of theta^m(sigma) and of E_sigma[g].
struct MomentBox {
  std::vector<std::pair<double, double>> theta_m;
  std::vector<std::pair<double, double>> interaction;
};
MomentBox moment_box(const Game& game, const SurvivorSet& a);

}  // namespace bnlab

#endif  // BNLAB_SOLVER_HPP_
