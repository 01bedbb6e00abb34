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

#include "bnlab/lp.hpp"

#include <algorithm>
#include <cmath>

#include "bnlab/errors.hpp"

namespace bnlab::lp {

void Problem::add_eq(std::vector<double> row, double b) {
  if (row.size() != num_vars) fail(ErrorCode::kInvalidArgument, "lp row width");
  a_eq.push_back(std::move(row));
  b_eq.push_back(b);
}

void Problem::add_ub(std::vector<double> row, double b) {
  if (row.size() != num_vars) fail(ErrorCode::kInvalidArgument, "lp row width");
  a_ub.push_back(std::move(row));
  b_ub.push_back(b);
}

Result find_feasible(const Problem& pb) {
  constexpr double kPivotEps = 1e-12;
  constexpr double kFeasEps = 1e-10;
  const std::size_t n = pb.num_vars;
  const std::size_t m_eq = pb.a_eq.size();
  const std::size_t m_ub = pb.a_ub.size();
  const std::size_t m = m_eq + m_ub;
  // Columns: structural, slacks (one per ub row), artificials (one per row).
  const std::size_t n_slack = m_ub;
  const std::size_t n_cols = n + n_slack + m;
  const std::size_t width = n_cols + 1;
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  std::vector<std::size_t> basis(m);

  for (std::size_t r = 0; r < m; ++r) {
    const bool eq = r < m_eq;
    const auto& row = eq ? pb.a_eq[r] : pb.a_ub[r - m_eq];
    double b = eq ? pb.b_eq[r] : pb.b_ub[r - m_eq];
    double sign = b < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) at(r, c) = sign * row[c];
    if (!eq) at(r, n + (r - m_eq)) = sign;
    at(r, n + n_slack + r) = 1.0;
    at(r, n_cols) = sign * b;
    basis[r] = n + n_slack + r;
  }
  // Objective row holds reduced costs of minimizing the artificial sum.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c >= n + n_slack && c < n_cols) continue;
      at(m, c) -= at(r, c);
    }
  }

  Result res;
  const int max_iter = static_cast<int>(50 * (m + n_cols) + 100);
  while (res.iterations < max_iter) {
    std::size_t enter = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (at(m, c) < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == n_cols) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = at(r, n_cols) / a;
      if (leave == m || ratio < best - 1e-15 ||
          (ratio <= best + 1e-15 && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    const double piv = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
    }
    basis[leave] = enter;
    ++res.iterations;
  }

  const double infeas = -at(m, n_cols);
  res.feasible = infeas <= kFeasEps;
  if (res.feasible) {
    res.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < n) res.x[basis[r]] = std::max(0.0, at(r, n_cols));
    }
  }
  return res;
}

}  // namespace bnlab::lp
