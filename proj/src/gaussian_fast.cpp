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

#include "gaussian_fast.hpp"

#include <algorithm>
#include <limits>

#include "bnlab/errors.hpp"
#include "bnlab/model_core.hpp"

namespace bnlab::detail {

GaussianFast::GaussianFast(const Game& game, double tol)
    : game_(game), tol_(tol) {
  const std::size_t n = game.num_players();
  kinks_.resize(n);
  convex_.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!game.is_gaussian(i)) {
      fail(ErrorCode::kInvalidArgument, "fast path needs linear-Gaussian players");
    }
    const Grid& a = game.actions(i);
    const auto& c = game.cost_table(i);
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
      kinks_[i].push_back((c[k + 1] - c[k]) / (a[k + 1] - a[k]));
      if (k > 0 && kinks_[i][k] < kinks_[i][k - 1]) convex_[i] = 0;
    }
  }
}

GaussianFast::Moments GaussianFast::moments(std::size_t i,
                                            const ProfileMixture& sigma) const {
  Moments m;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const double r = game_.model_rate(i, sigma.support[k]);
    const double s = game_.true_rate(i, sigma.support[k]);
    const double w = sigma.weights[k];
    m.srr += w * r * r;
    m.srs += w * r * s;
    m.sss += w * s * s;
  }
  const OpponentMixture opp = OpponentMixture::from(sigma, game_.space(), i);
  for (std::size_t k = 0; k < opp.keys.size(); ++k) {
    m.eg += opp.weights[k] * game_.interaction(i, opp.keys[k]);
  }
  return m;
}

double GaussianFast::theta_cont(std::size_t i, const Moments& m) const {
  return game_.gaussian(i).theta_true * m.srs / m.srr;
}

double GaussianFast::kl_at(std::size_t i, const Moments& m,
                           std::size_t j) const {
  const double ts = game_.gaussian(i).theta_true;
  const double a2 = 0.5 * m.srr;
  const double a1 = ts * m.srs;
  const double a0 = 0.5 * ts * ts * m.sss;
  const double t = game_.params(i)[j];
  return (a2 * t - a1) * t + a0;
}

double GaussianFast::score_at(std::size_t i, double intercept, double slope,
                              std::size_t x) const {
  return (intercept + slope * game_.actions(i)[x]) - game_.cost_table(i)[x];
}

void GaussianFast::minimizers(std::size_t i, const Moments& m,
                              std::vector<std::size_t>& tie) const {
  tie.clear();
  const Grid& grid = game_.params(i);
  const std::size_t n = grid.size();
  std::size_t center = m.srr > 0.0 ? grid.nearest(theta_cont(i, m)) : 0;
  std::size_t half = m.srr > 0.0 ? 2 : n;
  while (true) {
    const std::size_t lo = center > half ? center - half : 0;
    const std::size_t hi = std::min(n - 1, center + half);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = lo; j <= hi; ++j) best = std::min(best, kl_at(i, m, j));
    const bool lo_ok = lo == 0 || kl_at(i, m, lo) > best + tol_;
    const bool hi_ok = hi == n - 1 || kl_at(i, m, hi) > best + tol_;
    if ((lo_ok && hi_ok) || (lo == 0 && hi == n - 1)) {
      for (std::size_t j = lo; j <= hi; ++j) {
        if (kl_at(i, m, j) <= best + tol_) tie.push_back(j);
      }
      return;
    }
    half *= 4;
  }
}

void GaussianFast::best_responses(std::size_t i, double theta, double eg,
                                  std::vector<std::size_t>& out) const {
  const std::size_t n = game_.actions(i).size();
  const double tbar = 0.0 + 1.0 * theta;
  const double intercept = tbar * game_.gaussian(i).alpha;
  const double slope = tbar * eg;
  std::size_t center = 0;
  std::size_t half = n;
  if (convex_[i]) {
    const auto& kk = kinks_[i];
    center = static_cast<std::size_t>(std::lower_bound(kk.begin(), kk.end(), slope) - kk.begin());
    half = 2;
  }
  while (true) {
    const std::size_t lo = center > half ? center - half : 0;
    const std::size_t hi = std::min(n - 1, center + half);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x = lo; x <= hi; ++x) {
      best = std::max(best, score_at(i, intercept, slope, x));
    }
    const bool lo_ok = lo == 0 || score_at(i, intercept, slope, lo) < best - tol_;
    const bool hi_ok = hi == n - 1 || score_at(i, intercept, slope, hi) < best - tol_;
    if ((lo_ok && hi_ok) || (lo == 0 && hi == n - 1)) {
      for (std::size_t x = lo; x <= hi; ++x) {
        if (score_at(i, intercept, slope, x) >= best - tol_) out.push_back(x);
      }
      return;
    }
    half *= 4;
  }
}

void GaussianFast::justified(std::size_t i, const ProfileMixture& sigma,
                             std::vector<std::size_t>& out) const {
  finish(i, moments(i, sigma), &sigma, 0, out);
}

void GaussianFast::justified_point(std::size_t i, ProfileIndex p,
                                   std::vector<std::size_t>& out) const {
  // Bitwise equal to moments() on a unit-weight point mass.
  Moments m;
  const double r = game_.model_rate(i, p);
  const double s = game_.true_rate(i, p);
  m.srr = r * r;
  m.srs = r * s;
  m.sss = s * s;
  m.eg = game_.interaction(i, game_.space().without(p, i));
  finish(i, m, nullptr, p, out);
}

void GaussianFast::finish(std::size_t i, const Moments& m,
                          const ProfileMixture* sigma, ProfileIndex point,
                          std::vector<std::size_t>& out) const {
  out.clear();
  thread_local std::vector<std::size_t> tie;
  minimizers(i, m, tie);
  const Grid& grid = game_.params(i);
  if (tie.size() == 1) {
    best_responses(i, grid[tie[0]], m.eg, out);
    return;
  }
  if (tie.size() == 2 && convex_[i]) {
    thread_local std::vector<std::size_t> band;
    band.clear();
    best_responses(i, grid[tie[0]], m.eg, band);
    best_responses(i, grid[tie[1]], m.eg, band);
    const auto [lo, hi] = std::minmax_element(band.begin(), band.end());
    for (std::size_t x = *lo; x <= *hi; ++x) out.push_back(x);
    return;
  }
  const ProfileMixture pm = sigma ? *sigma : ProfileMixture::point(point);
  for (const auto& ja : justified_actions(game_, pm, i, tol_)) {
    out.push_back(ja.action);
  }
}

}  // namespace bnlab::detail
