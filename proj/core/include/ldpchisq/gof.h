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

#ifndef LDPCHISQ_GOF_H_
#define LDPCHISQ_GOF_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldpchisq/mechanisms.h"
#include "ldpchisq/rng.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

// Goodness-of-fit null hypothesis: a fixed, strictly interior distribution
// over d categories.
struct GofNull {
  ProbabilityVector p0;

  explicit GofNull(ProbabilityVector p) : p0(std::move(p)) {
    p0.require_interior("GofNull");
  }
  static GofNull uniform(std::size_t d) {
    return GofNull(ProbabilityVector::uniform(d));
  }
  int dim() const { return static_cast<int>(p0.dim()); }
  int dof() const { return dim() - 1; }
};

enum class Decision : std::uint8_t { kReject, kFailToReject };

// Monte-Carlo critical value configuration. The sample count m must exceed
// ceil(1/alpha) for the configured test level.
struct McConfig {
  int m = 999;
  RngStream rng;
};

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double critical_value = 0.0;
  // Present only when the null reference is a (non Monte-Carlo) chi-square.
  std::optional<double> p_value;
  Decision decision = Decision::kFailToReject;
  MechanismKind method;
  std::int64_t n = 0;
  int d = 0;
  double alpha = 0.0;
  // Monte-Carlo branch only: 1 + #{samples > statistic}, the statistic's
  // rank from the top among the null samples.
  std::optional<int> mc_rank;
};

// Classical Pearson statistic sum_j (H_j - n p0_j)^2 / (n p0_j).
double stat_classical(const Histogram& h, const GofNull& null);

// The same functional form evaluated on noisy values H + Z.
double stat_glrv(const NoisyHistogram& nh, const GofNull& null);

// Projected statistic n v' M_sigma v with v = (H+Z)/n - p0 and
// M_sigma = Pi (Diag(p0 + sigma) - p0 p0')^{-1} Pi. Requires sigma > 0.
double stat_projected(const NoisyHistogram& nh, const GofNull& null,
                      double sigma);

// Ascending-order rank of the Monte-Carlo critical value: tau is the k-th
// smallest of the m null samples with k = ceil((m+1)(1-alpha)). For m = 999,
// alpha = 0.05 this is rank 950, i.e. the 50th sample from the top; for
// m = 19 it is the sample maximum. Throws unless m > ceil(1/alpha).
int mc_tau_rank(int m, double alpha);

// Monte-Carlo critical value for the Laplace branch: draws m independent
// samples of stat_projected(H + Z, p0, 8/eps^2) under the null, with
// H ~ Multinomial(n, p0) and Z_j a sum of n Laplace(2/eps) draws, and
// returns the mc_tau_rank(m, alpha)-th smallest.
double mc_critical_value(const GofNull& null, std::int64_t n, double epsilon,
                         double alpha, const McConfig& mc);

// Noise-addition test. Gaussian branch: per-record Normal(0, 1/rho) noise,
// sigma = 1/rho, chi-square critical value. Laplace branch: per-record
// Laplace(2/eps) noise, sigma = 8/eps^2, Monte-Carlo critical value (an
// McConfig is required). Overloads accept raw records (privatized here),
// true counts (aggregate-equivalent noise added here), or an already
// privatized noisy histogram.
TestResult gof_noise(std::span<const OneHotRecord> records,
                     const GofNull& null, MechanismKind kind, double alpha,
                     RngStream& rng,
                     const std::optional<McConfig>& mc = std::nullopt);
TestResult gof_noise(const Histogram& h, const GofNull& null,
                     MechanismKind kind, double alpha, RngStream& rng,
                     const std::optional<McConfig>& mc = std::nullopt);
TestResult gof_noise_from_noisy(const NoisyHistogram& nh, const GofNull& null,
                                MechanismKind kind, double alpha,
                                const std::optional<McConfig>& mc =
                                    std::nullopt);

// Randomized-response test: privatizes each record with the exponential
// mechanism, then compares counts against the pushed-forward null.
TestResult gof_exponential(std::span<const OneHotRecord> records,
                           const GofNull& null, double epsilon, double alpha,
                           RngStream& rng);
TestResult gof_exponential_from_counts(const NoisyHistogram& counts,
                                       const GofNull& null, double epsilon,
                                       double alpha);

// Bit-flip test: privatizes each record with the bit-flip randomizer and
// evaluates the projected quadratic form against the pushed mean and
// covariance of the null.
TestResult gof_bitflip(std::span<const OneHotRecord> records,
                       const GofNull& null, double epsilon, double alpha,
                       RngStream& rng);
TestResult gof_bitflip_from_counts(const NoisyHistogram& counts,
                                   const GofNull& null, double epsilon,
                                   double alpha);

// Noncentrality parameter of the asymptotic statistic distribution under the
// local alternate p0 + delta/sqrt(n), for a mean-zero direction delta:
//   Gaussian: delta' (Diag(p0) - p0 p0' + (1/rho) I)^{-1} delta
//   Exponential: ((e^eps - 1)/(e^eps + d - 1))^2 sum_j delta_j^2 / pushed0_j
//   BitFlip: alpha^2 delta' Sigma(p0)^{-1} delta
// The Laplace branch has no closed-form noncentrality and is rejected.
double noncentral_lambda(MechanismKind kind, const GofNull& null,
                         std::span<const double> delta);

// Coefficient on delta'delta in the noncentrality parameter under a uniform
// null with d > 2 categories. The Gaussian row is parameterized by epsilon
// through the variance-matching rho = eps^2 / 8.
double uniform_null_coefficient(MechanismFamily family, int d, double epsilon);

}  // namespace ldpchisq

#endif  // LDPCHISQ_GOF_H_
