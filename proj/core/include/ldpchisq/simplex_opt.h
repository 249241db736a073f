// Copyright 2026 The ldpchisq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPCHISQ_SIMPLEX_OPT_H_
#define LDPCHISQ_SIMPLEX_OPT_H_

#include <functional>
#include <vector>

#include "ldpchisq/types.h"

namespace ldpchisq {

// Euclidean projection onto the probability simplex (sort-based algorithm).
std::vector<double> project_to_simplex(std::vector<double> v);

struct SimplexMinResult {
  MarginalPair arg;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SimplexMinOptions {
  double tolerance = 1e-10;  // stop once the objective improves by less
  int max_iterations = 500;
  double fd_step = 1e-6;  // central finite-difference step for the gradient
};

// Local minimization of a smooth objective over the product of two
// probability simplices by projected gradient descent with backtracking line
// search, started from `init`. The returned value never exceeds the
// objective at `init`. Throws OptimizationError (with the iteration and
// point in the message) if the objective turns non-finite during the search.
SimplexMinResult minimize_product_simplex(
    const std::function<double(const MarginalPair&)>& objective,
    const MarginalPair& init, const SimplexMinOptions& options = {});

}  // namespace ldpchisq

#endif  // LDPCHISQ_SIMPLEX_OPT_H_
