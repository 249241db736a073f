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

#ifndef LDPCHISQ_SIMULATION_H_
#define LDPCHISQ_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ldpchisq/mechanisms.h"
#include "ldpchisq/rng.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

enum class TestKind : std::uint8_t { kGof, kInd };

// Declarative simulation run: which test, which mechanisms, the privacy and
// sample-size grids, the alternate strength eta (0 = null calibration), the
// trial count, and the master seed. Identical configs (including the seed)
// produce byte-identical CSV output regardless of worker count.
struct ExperimentConfig {
  TestKind test = TestKind::kGof;
  std::vector<MechanismFamily> mechanisms;
  int d = 0;            // GOF dimension
  int rows = 0;         // IND shape
  int cols = 0;
  std::vector<double> epsilons;
  double alpha = 0.05;
  std::vector<std::int64_t> n_grid;
  double eta = 0.0;
  int trials = 1000;
  std::uint64_t master_seed = 0;
  int mc_samples = 999;  // Laplace branch Monte-Carlo sample count
  std::string output_path;

  void validate() const;  // throws ConfigError
};

struct PowerCurveRow {
  TestKind test = TestKind::kGof;
  MechanismFamily mechanism = MechanismFamily::kGaussianNoise;
  double epsilon = 0.0;
  int d = 0;
  int rows = 0;
  int cols = 0;
  std::int64_t n = 0;
  double eta = 0.0;
  double alpha = 0.0;
  int trials = 0;
  int rejections = 0;
  double power = 0.0;
  double std_error = 0.0;
  double predicted_power = 0.0;
  bool has_predicted = false;
};

struct PowerCurve {
  std::vector<PowerCurveRow> rows;
  std::string to_csv() const;
};

// Rejection rates under the null: uniform p0 for GOF, the independent
// uniform product for IND.
PowerCurve run_type1(const ExperimentConfig& config, int workers = 1);

// GOF power experiment: data drawn from p0 + eta (1,-1,...,1,-1) against the
// uniform null, with the noncentral prediction attached for the chi-square
// referenced mechanisms. Requires even d when eta != 0.
PowerCurve run_power_gof(const ExperimentConfig& config, int workers = 1);

// IND power experiment: cells drawn from the uniform product plus
// eta * pattern ⊗ pattern. Requires even rows and cols when eta != 0.
PowerCurve run_power_ind(const ExperimentConfig& config, int workers = 1);

// Noncentrality coefficient table (rows d x epsilon x mechanism) under the
// uniform null, for the exponential, bit-flip, and variance-matched Gaussian
// mechanisms. Each d must exceed 2.
struct CoefficientRow {
  int d = 0;
  double epsilon = 0.0;
  MechanismFamily mechanism = MechanismFamily::kGaussianNoise;
  double coefficient = 0.0;
};
std::vector<CoefficientRow> noncentral_coefficient_table(
    std::span<const int> ds, std::span<const double> epsilons);
std::string coefficient_table_to_csv(std::span<const CoefficientRow> rows);

// Privatized-aggregate samplers used by the trial loops. Each draws the
// exact law of aggregating n per-record randomizer outputs for data sampled
// i.i.d. from p, in O(d) instead of O(n d):
//  - noise kinds: Multinomial counts plus the aggregate noise law,
//  - exponential: Multinomial(n, pushed distribution),
//  - bit flip: per-coordinate Binomial(H_j, keep) + Binomial(n - H_j, flip)
//    given the category counts H.
NoisyHistogram sample_noise_aggregate(std::int64_t n,
                                      const ProbabilityVector& p,
                                      MechanismKind kind, RngStream& rng);
NoisyHistogram sample_exponential_aggregate(std::int64_t n,
                                            const ProbabilityVector& p,
                                            double epsilon, RngStream& rng);
NoisyHistogram sample_bitflip_aggregate(std::int64_t n,
                                        const ProbabilityVector& p,
                                        double epsilon, RngStream& rng);

// Runs fn(0..count-1) on up to `workers` threads. Any scheduling; callers
// must make per-index work self-contained so results are order-independent.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn);

// Flat key=value config parsing for the experiment commands.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config(const std::string& text);

// Canonical key=value echo of a resolved config (sidecar contents).
std::string experiment_config_echo(const ExperimentConfig& config);

std::string mechanism_name(MechanismFamily family);
MechanismFamily mechanism_from_name(const std::string& name);

}  // namespace ldpchisq

#endif  // LDPCHISQ_SIMULATION_H_
