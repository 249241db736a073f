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

#ifndef LDPCHISQ_INDEPENDENCE_H_
#define LDPCHISQ_INDEPENDENCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldpchisq/gof.h"
#include "ldpchisq/mechanisms.h"
#include "ldpchisq/rng.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

// r x c joint counts, flattened row-major: (i, j) -> i*c + j.
struct ContingencyTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  static ContingencyTable from_counts(int rows, int cols,
                                      std::vector<std::int64_t> counts);
  void validate() const;
  std::size_t size() const { return counts.size(); }
};

// Real-valued r x c table (counts after privatization).
struct NoisyContingencyTable {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  std::int64_t n = 0;

  static NoisyContingencyTable from_table(const ContingencyTable& t);
  void validate() const;
  std::size_t size() const { return values.size(); }
  std::uint32_t flat_dim() const {
    return static_cast<std::uint32_t>(rows * cols);
  }
};

// One individual's joint outcome: group index in [0, r), category index in
// [0, c).
struct PairRecord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
};

struct IndTestResult {
  double statistic = 0.0;
  int dof = 0;  // always (r - 1)(c - 1)
  double critical_value = 0.0;
  std::optional<double> p_value;
  Decision decision = Decision::kFailToReject;
  MechanismKind method;
  std::int64_t n = 0;
  int rows = 0;
  int cols = 0;
  double alpha = 0.0;
  // Small-count rule of thumb: set when any estimated expected cell count
  // n * pi1_i * pi2_j is at most 5, in which case the test fails to reject
  // without evaluating the statistic.
  bool guard_triggered = false;
};

// Row-major flattening of pi1 pi2'; a simplex point of length r*c.
ProbabilityVector product_model(const MarginalPair& m);

// Plug-in marginal estimates from a noisy table: row and column sums divided
// by the noisy total, clamped to the interior simplex. Throws
// DegenerateSampleError when the noisy total is nonpositive.
MarginalPair estimate_marginals_noise(const NoisyContingencyTable& t);

// Quadratic-form statistic for the noise-addition independence test:
// (1/n) (Y - n p(theta))' Pi Mhat^{-1} Pi (Y - n p(theta)) with
// Mhat = Diag(p(plug)) - p(plug) p(plug)' + (1/rho) I evaluated at the fixed
// plug-in estimates.
double stat_ind_noise(const NoisyContingencyTable& t, const MarginalPair& theta,
                      const MarginalPair& plug, double rho);

// Distribution of a randomized-response output over the r*c joint categories
// when the input is drawn from the product model:
// beta ((e^eps - 1) p(m) + 1) with beta = 1/(e^eps + rc - 1). Every entry is
// at least beta; sums to 1.
ProbabilityVector pushed_table_exp(const MarginalPair& m, double epsilon);

// Closed-form (debiased) marginal estimates from aggregated
// randomized-response counts, clamped to the interior simplex.
MarginalPair estimate_marginals_exp(const NoisyContingencyTable& counts,
                                    double epsilon);

// Pearson-style statistic of the randomized-response independence test at
// the plug-in estimates: sum_ij (counts_ij - n pushed_ij)^2 / (n pushed_ij).
double ind_exp_statistic(const NoisyContingencyTable& counts,
                         const MarginalPair& plug, double epsilon);

// Minimum chi-square form behind the randomized-response test, parameterized
// by theta with weights fixed at the plug-in product model:
//   n sum_ij (counts_ij/n - pushed_ij(theta))^2 / p(plug)_ij.
// The closed-form estimates are its exact minimizer over the product of
// simplices: the debiasing identities zero every row and column residual
// sum, which is the stationarity condition under these weights.
double ind_exp_quadratic(const NoisyContingencyTable& counts,
                         const MarginalPair& theta, const MarginalPair& plug,
                         double epsilon);

// Mean of a bit-flip output over the flattened table:
// alpha p(m) + 1/(e^{eps/2} + 1). Entries in (0, 1), not summing to 1.
std::vector<double> pushed_table_bitflip(const MarginalPair& m,
                                         double epsilon);

// Debiased marginal estimates from aggregated bit-flip counts, clamped.
MarginalPair estimate_marginals_bitflip(const NoisyContingencyTable& t,
                                        double epsilon);

// Quadratic-form statistic for the bit-flip independence test:
// (1/n) (Y - n ptilde(theta))' Pi Sigma(p(plug))^{-1} Pi (Y - n ptilde(theta)).
double stat_ind_bitflip(const NoisyContingencyTable& t,
                        const MarginalPair& theta, const MarginalPair& plug,
                        double epsilon);

// Gaussian-noise independence test: privatizes each record's r*c one-hot
// with per-coordinate Normal(0, 1/rho), estimates marginals, applies the
// small-count guard, and minimizes stat_ind_noise over the product of
// simplices starting from the plug-in estimates.
IndTestResult ind_noise_test(std::span<const PairRecord> records, int rows,
                             int cols, double rho, double alpha,
                             RngStream& rng);
IndTestResult ind_noise_test_from_noisy(const NoisyContingencyTable& t,
                                        double rho, double alpha);

// Randomized-response independence test; the closed-form estimates make the
// minimization unnecessary.
IndTestResult ind_exp_test(std::span<const PairRecord> records, int rows,
                           int cols, double epsilon, double alpha,
                           RngStream& rng);
IndTestResult ind_exp_test_from_counts(const NoisyContingencyTable& counts,
                                       double epsilon, double alpha);

// Bit-flip independence test, minimized like the noise test.
IndTestResult ind_bitflip_test(std::span<const PairRecord> records, int rows,
                               int cols, double epsilon, double alpha,
                               RngStream& rng);
IndTestResult ind_bitflip_test_from_counts(const NoisyContingencyTable& t,
                                           double epsilon, double alpha);

}  // namespace ldpchisq

#endif  // LDPCHISQ_INDEPENDENCE_H_
