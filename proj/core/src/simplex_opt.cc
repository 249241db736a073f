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

#include "ldpchisq/simplex_opt.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ldpchisq/error.h"

namespace ldpchisq {

std::vector<double> project_to_simplex(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("project_to_simplex: empty");
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double tau = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double candidate = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      rho = static_cast<int>(j + 1);
      tau = candidate;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(x - tau, 0.0);
  // Tidy the floating sum so downstream simplex validation holds exactly.
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
  return v;
}

namespace {

MarginalPair make_pair(std::vector<double> a, std::vector<double> b) {
  return MarginalPair{ProbabilityVector(std::move(a)),
                      ProbabilityVector(std::move(b))};
}

[[noreturn]] void throw_non_finite(int iteration, const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::ostringstream msg;
  msg << "minimize_product_simplex: objective non-finite at iteration "
      << iteration << " for point (";
  for (double x : a) msg << x << " ";
  msg << "| ";
  for (double x : b) msg << x << " ";
  msg << ")";
  throw OptimizationError(msg.str());
}

// Reduced-coordinate finite-difference gradient for one simplex block: the
// last coordinate absorbs changes, so probes stay on the sum-1 hyperplane.
// Steps shrink near the boundary so probes remain feasible.
std::vector<double> block_gradient(
    const std::function<double(const std::vector<double>&,
                               const std::vector<double>&)>& f,
    std::vector<double>& block, const std::vector<double>& other,
    bool block_first, double f_at_x, double h, int iteration) {
  const std::size_t len = block.size();
  std::vector<double> grad(len - 1, 0.0);
  const std::size_t last = len - 1;
  for (std::size_t j = 0; j + 1 < len; ++j) {
    const double h_plus = std::min(h, block[last]);
    const double h_minus = std::min(h, block[j]);
    double f_plus = f_at_x;
    double f_minus = f_at_x;
    double denom = 0.0;
    if (h_plus > 1e-12) {
      block[j] += h_plus;
      block[last] -= h_plus;
      f_plus = block_first ? f(block, other) : f(other, block);
      block[j] -= h_plus;
      block[last] += h_plus;
      denom += h_plus;
    }
    if (h_minus > 1e-12) {
      block[j] -= h_minus;
      block[last] += h_minus;
      f_minus = block_first ? f(block, other) : f(other, block);
      block[j] += h_minus;
      block[last] -= h_minus;
      denom += h_minus;
    }
    if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
      throw_non_finite(iteration, block_first ? block : other,
                       block_first ? other : block);
    }
    grad[j] = denom > 0.0 ? (f_plus - f_minus) / denom : 0.0;
  }
  return grad;
}

// Maps a reduced gradient back to a full-coordinate step direction.
std::vector<double> descend_direction(const std::vector<double>& grad) {
  std::vector<double> dir(grad.size() + 1, 0.0);
  for (std::size_t j = 0; j < grad.size(); ++j) {
    dir[j] = -grad[j];
    dir.back() += grad[j];
  }
  return dir;
}

}  // namespace

SimplexMinResult minimize_product_simplex(
    const std::function<double(const MarginalPair&)>& objective,
    const MarginalPair& init, const SimplexMinOptions& options) {
  std::vector<double> x1 = init.pi1.entries();
  std::vector<double> x2 = init.pi2.entries();

  const auto raw = [&objective](const std::vector<double>& a,
                                const std::vector<double>& b) {
    return objective(MarginalPair{ProbabilityVector(a), ProbabilityVector(b)});
  };

  double f = raw(x1, x2);
  if (!std::isfinite(f)) throw_non_finite(0, x1, x2);

  double step = 1.0;
  int iterations = 0;
  bool converged = false;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    iterations = iter;
    const std::vector<double> g1 =
        block_gradient(raw, x1, x2, /*block_first=*/true, f, options.fd_step,
                       iter);
    const std::vector<double> g2 =
        block_gradient(raw, x2, x1, /*block_first=*/false, f, options.fd_step,
                       iter);
    double gnorm2 = 0.0;
    for (double g : g1) gnorm2 += g * g;
    for (double g : g2) gnorm2 += g * g;
    if (gnorm2 < 1e-24) {
      converged = true;
      break;
    }
    const std::vector<double> dir1 = descend_direction(g1);
    const std::vector<double> dir2 = descend_direction(g2);

    bool accepted = false;
    double t = step;
    std::vector<double> c1, c2;
    double fc = f;
    while (t >= 1e-14) {
      c1 = x1;
      c2 = x2;
      for (std::size_t j = 0; j < c1.size(); ++j) c1[j] += t * dir1[j];
      for (std::size_t j = 0; j < c2.size(); ++j) c2[j] += t * dir2[j];
      c1 = project_to_simplex(std::move(c1));
      c2 = project_to_simplex(std::move(c2));
      fc = raw(c1, c2);
      if (!std::isfinite(fc)) throw_non_finite(iter, c1, c2);
      if (fc <= f - 1e-4 * t * gnorm2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double improvement = f - fc;
    x1 = std::move(c1);
    x2 = std::move(c2);
    f = fc;
    step = std::min(t * 2.0, 1e3);
    if (improvement < options.tolerance) {
      converged = true;
      break;
    }
  }
  return SimplexMinResult{make_pair(std::move(x1), std::move(x2)), f,
                          iterations, converged};
}

}  // namespace ldpchisq
