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

#ifndef BNLAB_SRC_GAUSSIAN_FAST_HPP_
#define BNLAB_SRC_GAUSSIAN_FAST_HPP_

#include <cstddef>
#include <vector>

#include "bnlab/game.hpp"
#include "bnlab/mixture.hpp"

namespace bnlab::detail {

// Local-window versions of the minimizer and best-response scans for
// linear-Gaussian players. Values are computed with the same expressions
// as the full scans in model_core, so band membership agrees.
class GaussianFast {
 public:
  GaussianFast(const Game& game, double tol);

  struct Moments {
    double srr = 0.0;
    double srs = 0.0;
    double sss = 0.0;
    double eg = 0.0;
  };

  Moments moments(std::size_t i, const ProfileMixture& sigma) const;
  // Continuous minimizer theta_true * srs / srr.
  double theta_cont(std::size_t i, const Moments& m) const;
  void minimizers(std::size_t i, const Moments& m,
                  std::vector<std::size_t>& tie) const;
  // Ascending tol-band of best responses to a degenerate belief.
  void best_responses(std::size_t i, double theta, double eg,
                      std::vector<std::size_t>& out) const;
  // Actions justified at sigma by some belief over the minimizer set.
  void justified(std::size_t i, const ProfileMixture& sigma,
                 std::vector<std::size_t>& out) const;
  // Same as justified() for the point mass on p, without allocating.
  void justified_point(std::size_t i, ProfileIndex p,
                       std::vector<std::size_t>& out) const;

  // s-values at which consecutive own actions tie: kinks[k] separates
  // actions k and k+1.
  const std::vector<double>& kinks(std::size_t i) const { return kinks_[i]; }

 private:
  void finish(std::size_t i, const Moments& m, const ProfileMixture* sigma,
              ProfileIndex point, std::vector<std::size_t>& out) const;
  double kl_at(std::size_t i, const Moments& m, std::size_t j) const;
  double score_at(std::size_t i, double intercept, double slope,
                  std::size_t x) const;

  const Game& game_;
  double tol_;
  std::vector<std::vector<double>> kinks_;
  std::vector<char> convex_;
};

}  // namespace bnlab::detail

#endif  // BNLAB_SRC_GAUSSIAN_FAST_HPP_
