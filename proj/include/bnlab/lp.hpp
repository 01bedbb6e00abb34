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

#ifndef BNLAB_LP_HPP_
#define BNLAB_LP_HPP_

#include <cstddef>
#include <vector>

namespace bnlab::lp {

// Feasibility problem over x >= 0:
//   a_eq x = b_eq,  a_ub x <= b_ub.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;

  void add_eq(std::vector<double> row, double b);
  void add_ub(std::vector<double> row, double b);
};

struct Result {
  bool feasible = false;
  std::vector<double> x;
  int iterations = 0;
};

// Phase one of the dense tableau simplex method with Bland's rule.
Result find_feasible(const Problem& problem);

}  // namespace bnlab::lp

#endif  // BNLAB_LP_HPP_
