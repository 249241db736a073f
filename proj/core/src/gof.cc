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

#include "ldpchisq/gof.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpchisq/chi_square.h"
#include "ldpchisq/sampling.h"
#include "ldpchisq/sym_matrix.h"

namespace ldpchisq {
namespace {

// Middle matrix Pi (Diag(p0 + sigma) - p0 p0')^{-1} Pi, cached across the
// many evaluations a Monte-Carlo loop performs.
Eigen::MatrixXd projected_middle(const ProbabilityVector& p0, double sigma) {
  const int d = static_cast<int>(p0.dim());
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = (i == j ? p0[i] + sigma : 0.0) - p0[i] * p0[j];
    }
  }
  const Eigen::MatrixXd inv = invert_spd(SymMatrix(std::move(a))).mat();
  const Eigen::MatrixXd pi = centering_projector(d).mat();
  return pi * inv * pi;
}

double quad_form(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  return v.dot(m * v);
}

Eigen::VectorXd centered_scaled(const NoisyHistogram& nh,
                                const std::vector<double>& reference) {
  const std::size_t d = nh.dim();
  Eigen::VectorXd v(d);
  const double n = static_cast<double>(nh.n);
  for (std::size_t j = 0; j < d; ++j) v(j) = nh.values[j] / n - reference[j];
  return v;
}

void check_dims(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

TestResult make_result(double statistic, int dof, double critical_value,
                       std::optional<double> p_value, MechanismKind method,
                       std::int64_t n, int d, double alpha,
                       std::optional<int> mc_rank = std::nullopt) {
  TestResult r;
  r.statistic = statistic;
  r.dof = dof;
  r.critical_value = critical_value;
  r.p_value = p_value;
  r.decision =
      statistic > critical_value ? Decision::kReject : Decision::kFailToReject;
  r.method = method;
  r.n = n;
  r.d = d;
  r.alpha = alpha;
  r.mc_rank = mc_rank;
  return r;
}

// Chi-square referenced decision shared by the Gaussian, exponential, and
// bit-flip branches.
TestResult chi2_result(double statistic, const GofNull& null,
                       MechanismKind method, std::int64_t n, double alpha) {
  const int dof = null.dof();
  const double crit = chi2_quantile(dof, 1.0 - alpha);
  return make_result(statistic, dof, crit, chi2_sf(dof, statistic), method, n,
                     null.dim(), alpha);
}

NoisyHistogram noisy_from_records(std::span<const OneHotRecord> records,
                                  const GofNull& null, MechanismKind kind,
                                  RngStream& rng) {
  if (records.empty()) throw std::invalid_argument("gof: no records");
  NoisyHistogram nh;
  nh.values.assign(null.p0.dim(), 0.0);
  nh.n = static_cast<std::int64_t>(records.size());
  for (const OneHotRecord& rec : records) {
    check_dims(rec.dim, null.p0.dim(), "gof");
    const PrivateReport rep = randomize_noise(rec, kind, rng);
    const auto& v = std::get<std::vector<double>>(rep.payload);
    for (std::size_t j = 0; j < v.size(); ++j) nh.values[j] += v[j];
  }
  return nh;
}

struct McOutcome {
  double tau = 0.0;
  int rank_from_top = 0;
};

// Shared by mc_critical_value and the Laplace test branch, which also needs
// the observed statistic's rank among the samples.
std::vector<double> mc_samples(const GofNull& null, std::int64_t n,
                               double epsilon, const McConfig& mc,
                               const Eigen::MatrixXd& middle) {
  const double scale = 2.0 / epsilon;
  const std::size_t d = null.p0.dim();
  std::vector<double> samples(mc.m);
  for (int i = 0; i < mc.m; ++i) {
    RngStream s = mc.rng.substream(static_cast<std::uint64_t>(i));
    const Histogram h = sample_histogram(n, null.p0, s);
    NoisyHistogram nh;
    nh.values.assign(d, 0.0);
    nh.n = n;
    for (std::size_t j = 0; j < d; ++j) {
      nh.values[j] =
          static_cast<double>(h.counts[j]) + sample_laplace_sum(n, scale, s);
    }
    const Eigen::VectorXd v = centered_scaled(nh, null.p0.entries());
    samples[i] = static_cast<double>(n) * quad_form(middle, v);
  }
  return samples;
}

}  // namespace

double stat_classical(const Histogram& h, const GofNull& null) {
  h.validate();
  check_dims(h.dim(), null.p0.dim(), "stat_classical");
  if (h.n < 1) throw std::invalid_argument("stat_classical: n must be >= 1");
  const double n = static_cast<double>(h.n);
  double q = 0.0;
  for (std::size_t j = 0; j < h.dim(); ++j) {
    const double expected = n * null.p0[j];
    const double diff = static_cast<double>(h.counts[j]) - expected;
    q += diff * diff / expected;
  }
  return q;
}

double stat_glrv(const NoisyHistogram& nh, const GofNull& null) {
  nh.validate();
  check_dims(nh.dim(), null.p0.dim(), "stat_glrv");
  const double n = static_cast<double>(nh.n);
  double q = 0.0;
  for (std::size_t j = 0; j < nh.dim(); ++j) {
    const double expected = n * null.p0[j];
    const double diff = nh.values[j] - expected;
    q += diff * diff / expected;
  }
  return q;
}

double stat_projected(const NoisyHistogram& nh, const GofNull& null,
                      double sigma) {
  nh.validate();
  check_dims(nh.dim(), null.p0.dim(), "stat_projected");
  if (sigma <= 0.0) {
    throw std::invalid_argument("stat_projected: sigma must be > 0");
  }
  const Eigen::MatrixXd middle = projected_middle(null.p0, sigma);
  const Eigen::VectorXd v = centered_scaled(nh, null.p0.entries());
  return static_cast<double>(nh.n) * quad_form(middle, v);
}

int mc_tau_rank(int m, double alpha) {
  check_alpha(alpha);
  const int min_m = static_cast<int>(std::ceil(1.0 / alpha - 1e-9));
  if (m <= min_m) {
    throw std::invalid_argument(
        "Monte-Carlo critical value requires m > ceil(1/alpha)");
  }
  // Small slack so that (m+1)(1-alpha) hitting an integer up to rounding
  // still maps to that integer.
  return static_cast<int>(
      std::ceil(static_cast<double>(m + 1) * (1.0 - alpha) - 1e-9));
}

double mc_critical_value(const GofNull& null, std::int64_t n, double epsilon,
                         double alpha, const McConfig& mc) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("mc_critical_value: epsilon must be > 0");
  }
  if (n < 1) throw std::invalid_argument("mc_critical_value: n must be >= 1");
  const int rank = mc_tau_rank(mc.m, alpha);
  const double sigma = 8.0 / (epsilon * epsilon);
  const Eigen::MatrixXd middle = projected_middle(null.p0, sigma);
  std::vector<double> samples = mc_samples(null, n, epsilon, mc, middle);
  std::nth_element(samples.begin(), samples.begin() + (rank - 1),
                   samples.end());
  return samples[rank - 1];
}

TestResult gof_noise_from_noisy(const NoisyHistogram& nh, const GofNull& null,
                                MechanismKind kind, double alpha,
                                const std::optional<McConfig>& mc) {
  nh.validate();
  check_dims(nh.dim(), null.p0.dim(), "gof_noise");
  check_alpha(alpha);
  if (kind.family == MechanismFamily::kGaussianNoise) {
    const double sigma = 1.0 / kind.rho();
    const double q = stat_projected(nh, null, sigma);
    return chi2_result(q, null, kind, nh.n, alpha);
  }
  if (kind.family != MechanismFamily::kLaplaceNoise) {
    throw std::invalid_argument("gof_noise: kind must be Gaussian or Laplace");
  }
  if (!mc.has_value()) {
    throw std::invalid_argument(
        "gof_noise: the Laplace branch requires a Monte-Carlo configuration");
  }
  const double epsilon = kind.epsilon();
  const int rank = mc_tau_rank(mc->m, alpha);
  const double sigma = 8.0 / (epsilon * epsilon);
  const Eigen::MatrixXd middle = projected_middle(null.p0, sigma);
  const Eigen::VectorXd v = centered_scaled(nh, null.p0.entries());
  const double q = static_cast<double>(nh.n) * quad_form(middle, v);
  std::vector<double> samples = mc_samples(null, nh.n, epsilon, *mc, middle);
  std::nth_element(samples.begin(), samples.begin() + (rank - 1),
                   samples.end());
  const double tau = samples[rank - 1];
  int above = 0;
  for (double s : samples) {
    if (s > q) ++above;
  }
  return make_result(q, null.dof(), tau, std::nullopt, kind, nh.n, null.dim(),
                     alpha, 1 + above);
}

TestResult gof_noise(const Histogram& h, const GofNull& null,
                     MechanismKind kind, double alpha, RngStream& rng,
                     const std::optional<McConfig>& mc) {
  h.validate();
  check_dims(h.dim(), null.p0.dim(), "gof_noise");
  // Aggregate-equivalent noise: the per-record noises sum to Normal(0, n/rho)
  // per coordinate for the Gaussian kind and to a sum of n Laplace(2/eps)
  // draws for the Laplace kind.
  NoisyHistogram nh;
  nh.values.assign(h.counts.begin(), h.counts.end());
  nh.n = h.n;
  if (kind.family == MechanismFamily::kGaussianNoise) {
    const double stddev = std::sqrt(static_cast<double>(h.n) / kind.rho());
    for (double& v : nh.values) v += rng.normal(0.0, stddev);
  } else if (kind.family == MechanismFamily::kLaplaceNoise) {
    const double scale = 2.0 / kind.epsilon();
    for (double& v : nh.values) v += sample_laplace_sum(h.n, scale, rng);
  } else {
    throw std::invalid_argument("gof_noise: kind must be Gaussian or Laplace");
  }
  return gof_noise_from_noisy(nh, null, kind, alpha, mc);
}

TestResult gof_noise(std::span<const OneHotRecord> records,
                     const GofNull& null, MechanismKind kind, double alpha,
                     RngStream& rng, const std::optional<McConfig>& mc) {
  const NoisyHistogram nh = noisy_from_records(records, null, kind, rng);
  return gof_noise_from_noisy(nh, null, kind, alpha, mc);
}

TestResult gof_exponential_from_counts(const NoisyHistogram& counts,
                                       const GofNull& null, double epsilon,
                                       double alpha) {
  counts.validate();
  check_dims(counts.dim(), null.p0.dim(), "gof_exponential");
  check_alpha(alpha);
  if (epsilon <= 0.0) {
    throw std::invalid_argument("gof_exponential: epsilon must be > 0");
  }
  const ProbabilityVector pushed = pushed_exp_distribution(null.p0, epsilon);
  const double n = static_cast<double>(counts.n);
  double q = 0.0;
  for (std::size_t j = 0; j < counts.dim(); ++j) {
    const double expected = n * pushed[j];
    const double diff = counts.values[j] - expected;
    q += diff * diff / expected;
  }
  return chi2_result(q, null, MechanismKind::exponential(epsilon), counts.n,
                     alpha);
}

TestResult gof_exponential(std::span<const OneHotRecord> records,
                           const GofNull& null, double epsilon, double alpha,
                           RngStream& rng) {
  if (records.empty()) throw std::invalid_argument("gof_exponential: no records");
  if (epsilon <= 0.0) {
    throw std::invalid_argument("gof_exponential: epsilon must be > 0");
  }
  NoisyHistogram counts;
  counts.values.assign(null.p0.dim(), 0.0);
  counts.n = static_cast<std::int64_t>(records.size());
  for (const OneHotRecord& rec : records) {
    check_dims(rec.dim, null.p0.dim(), "gof_exponential");
    counts.values[randomize_exponential(rec, epsilon, rng).index] += 1.0;
  }
  return gof_exponential_from_counts(counts, null, epsilon, alpha);
}

TestResult gof_bitflip_from_counts(const NoisyHistogram& counts,
                                   const GofNull& null, double epsilon,
                                   double alpha) {
  counts.validate();
  check_dims(counts.dim(), null.p0.dim(), "gof_bitflip");
  check_alpha(alpha);
  if (epsilon <= 0.0) {
    throw std::invalid_argument("gof_bitflip: epsilon must be > 0");
  }
  const int d = null.dim();
  const std::vector<double> mean = pushed_bitflip_mean(null.p0, epsilon);
  const Eigen::MatrixXd inv = invert_spd(bitflip_covariance(null.p0, epsilon))
                                  .mat();
  const Eigen::MatrixXd pi = centering_projector(d).mat();
  const Eigen::MatrixXd middle = pi * inv * pi;
  const Eigen::VectorXd v = centered_scaled(counts, mean);
  const double q = static_cast<double>(counts.n) * quad_form(middle, v);
  return chi2_result(q, null, MechanismKind::bit_flip(epsilon), counts.n,
                     alpha);
}

TestResult gof_bitflip(std::span<const OneHotRecord> records,
                       const GofNull& null, double epsilon, double alpha,
                       RngStream& rng) {
  if (records.empty()) throw std::invalid_argument("gof_bitflip: no records");
  if (epsilon <= 0.0) {
    throw std::invalid_argument("gof_bitflip: epsilon must be > 0");
  }
  NoisyHistogram counts;
  counts.values.assign(null.p0.dim(), 0.0);
  counts.n = static_cast<std::int64_t>(records.size());
  for (const OneHotRecord& rec : records) {
    check_dims(rec.dim, null.p0.dim(), "gof_bitflip");
    const PrivateReport rep = randomize_bitflip(rec, epsilon, rng);
    const auto& bits = std::get<std::vector<bool>>(rep.payload);
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if (bits[j]) counts.values[j] += 1.0;
    }
  }
  return gof_bitflip_from_counts(counts, null, epsilon, alpha);
}

double noncentral_lambda(MechanismKind kind, const GofNull& null,
                         std::span<const double> delta) {
  const std::size_t d = null.p0.dim();
  check_dims(delta.size(), d, "noncentral_lambda");
  double sum = 0.0;
  for (double x : delta) sum += x;
  if (std::fabs(sum) > 1e-9) {
    throw std::invalid_argument(
        "noncentral_lambda: delta must sum to zero (mean-zero direction)");
  }
  switch (kind.family) {
    case MechanismFamily::kGaussianNoise: {
      Eigen::MatrixXd a(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          a(i, j) = (i == j ? null.p0[i] + 1.0 / kind.rho() : 0.0) -
                    null.p0[i] * null.p0[j];
        }
      }
      return invert_spd(SymMatrix(std::move(a))).quad_form(delta);
    }
    case MechanismFamily::kExponential: {
      const double e = std::exp(kind.epsilon());
      const double coeff = (e - 1.0) / (e + static_cast<double>(d) - 1.0);
      const ProbabilityVector pushed =
          pushed_exp_distribution(null.p0, kind.epsilon());
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += delta[j] * delta[j] / pushed[j];
      return coeff * coeff * s;
    }
    case MechanismFamily::kBitFlip: {
      const double alpha = bitflip_alpha(kind.epsilon());
      const SymMatrix inv =
          invert_spd(bitflip_covariance(null.p0, kind.epsilon()));
      return alpha * alpha * inv.quad_form(delta);
    }
    case MechanismFamily::kLaplaceNoise:
      throw std::invalid_argument(
          "noncentral_lambda: no closed form for the Laplace branch");
  }
  throw std::invalid_argument("noncentral_lambda: unknown mechanism");
}

double uniform_null_coefficient(MechanismFamily family, int d,
                                double epsilon) {
  if (d <= 2) {
    throw std::invalid_argument("uniform_null_coefficient: d must exceed 2");
  }
  if (epsilon <= 0.0) {
    throw std::invalid_argument("uniform_null_coefficient: epsilon must be > 0");
  }
  const double dd = static_cast<double>(d);
  switch (family) {
    case MechanismFamily::kExponential: {
      const double e = std::exp(epsilon);
      const double c = (e - 1.0) / (e + dd - 1.0);
      return dd * c * c;
    }
    case MechanismFamily::kBitFlip: {
      const double eh = std::exp(0.5 * epsilon);
      const double alpha = bitflip_alpha(epsilon);
      const double iso = eh / ((eh + 1.0) * (eh + 1.0));
      return alpha * alpha / (alpha * alpha / dd + iso);
    }
    case MechanismFamily::kGaussianNoise: {
      const double rho = epsilon * epsilon / 8.0;
      return 1.0 / (1.0 / dd + 1.0 / rho);
    }
    case MechanismFamily::kLaplaceNoise:
      throw std::invalid_argument(
          "uniform_null_coefficient: no closed form for the Laplace branch");
  }
  throw std::invalid_argument("uniform_null_coefficient: unknown mechanism");
}

}  // namespace ldpchisq
