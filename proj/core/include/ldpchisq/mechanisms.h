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

#ifndef LDPCHISQ_MECHANISMS_H_
#define LDPCHISQ_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ldpchisq/rng.h"
#include "ldpchisq/sym_matrix.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

// Privacy parameters: epsilon for pure local DP, rho for local zCDP, delta
// for the approximate-DP slack of conversions. At least one of epsilon, rho
// must be strictly positive and delta must lie in [0, 1).
struct PrivacyBudget {
  double epsilon = 0.0;
  double rho = 0.0;
  double delta = 0.0;

  void validate() const;
};

// A pure epsilon-LDP randomizer is also epsilon^2/2 locally zCDP.
double budget_ldp_to_zcdp(double epsilon);

// A rho-LzCDP randomizer is (rho + sqrt(2 rho ln(2/delta)), delta)-LDP for
// any delta in (0, 1).
double budget_zcdp_to_ldp(double rho, double delta);

enum class MechanismFamily : std::uint8_t {
  kGaussianNoise,  // per-coordinate Normal(0, 1/rho)
  kLaplaceNoise,   // per-coordinate Laplace(2/epsilon)
  kExponential,    // randomized response over categories
  kBitFlip,        // independent biased flip of each coordinate
};

// Mechanism selector plus its parameter: rho for Gaussian noise, epsilon for
// the other three. The parameter must be strictly positive.
struct MechanismKind {
  MechanismFamily family = MechanismFamily::kGaussianNoise;
  double param = 0.0;

  static MechanismKind gaussian_noise(double rho);
  static MechanismKind laplace_noise(double epsilon);
  static MechanismKind exponential(double epsilon);
  static MechanismKind bit_flip(double epsilon);

  double epsilon() const;  // throws for Gaussian (parameterized by rho)
  double rho() const;      // throws unless Gaussian
  std::string name() const;
};

// A single individual's record: one of d categories, held as the index of a
// one-hot vector.
struct OneHotRecord {
  std::uint32_t index = 0;
  std::uint32_t dim = 0;

  OneHotRecord(std::uint32_t index, std::uint32_t dim);
};

// Output of one local randomizer application. The payload shape matches the
// mechanism: a real vector for the noise mechanisms, a category for the
// exponential mechanism, a packed bit vector for bit flipping.
struct PrivateReport {
  MechanismKind mechanism;
  std::variant<std::vector<double>, OneHotRecord, std::vector<bool>> payload;

  std::size_t dim() const;
};

// Adds i.i.d. noise to each coordinate of the one-hot vector: Normal(0,
// 1/rho) for the Gaussian kind, Laplace(2/epsilon) for the Laplace kind.
PrivateReport randomize_noise(const OneHotRecord& record, MechanismKind kind,
                              RngStream& rng);

// Randomized response over d >= 2 categories: keeps the input category with
// probability e^eps / (e^eps + d - 1), otherwise reports one of the other
// categories uniformly. A single uniform draw decides against the two-level
// cumulative law. epsilon = 0 is permitted and yields the uniform output.
OneHotRecord randomize_exponential(const OneHotRecord& record, double epsilon,
                                   RngStream& rng);

// Flips each coordinate of the one-hot vector independently, keeping it with
// probability e^{eps/2} / (e^{eps/2} + 1). epsilon = 0 yields uniform bits.
PrivateReport randomize_bitflip(const OneHotRecord& record, double epsilon,
                                RngStream& rng);

// Coordinate-wise sum of reports sharing one mechanism and dimension.
// Exponential reports aggregate to integer category counts (reinterpreted as
// a NoisyHistogram). Throws for an empty list or mixed mechanisms.
NoisyHistogram aggregate(std::span<const PrivateReport> reports);

// Distribution of a randomized-response output when the input is drawn from
// p: p * e^eps/(e^eps + d - 1) + (1 - p) / (e^eps + d - 1). A convex mix of
// p with the uniform distribution; still a simplex point.
ProbabilityVector pushed_exp_distribution(const ProbabilityVector& p,
                                          double epsilon);

// Mean of a bit-flip output when the input is drawn from p:
// ((e^{eps/2} - 1) p + 1) / (e^{eps/2} + 1). Entries lie in (0, 1) but do
// not sum to 1 in general.
std::vector<double> pushed_bitflip_mean(const ProbabilityVector& p,
                                        double epsilon);

// Asymptotic covariance of sqrt(n) (aggregated bit-flip histogram / n - mean)
// for inputs drawn from a strictly interior p:
//   alpha^2 [Diag(p) - p p'] + e^{eps/2} / (e^{eps/2} + 1)^2 I,
// with alpha = (e^{eps/2} - 1) / (e^{eps/2} + 1). Symmetric positive
// definite; its smallest eigenvalue is at least the isotropic term.
SymMatrix bitflip_covariance(const ProbabilityVector& p, double epsilon);

// The alpha coefficient above; reused by estimators and power calculations.
double bitflip_alpha(double epsilon);

}  // namespace ldpchisq

#endif  // LDPCHISQ_MECHANISMS_H_
