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

#include "ldpchisq/mechanisms.h"

#include <cmath>
#include <stdexcept>

#include "ldpchisq/sampling.h"

namespace ldpchisq {

void PrivacyBudget::validate() const {
  if (epsilon < 0.0 || rho < 0.0) {
    throw std::invalid_argument("PrivacyBudget: parameters must be >= 0");
  }
  if (epsilon == 0.0 && rho == 0.0) {
    throw std::invalid_argument(
        "PrivacyBudget: one of epsilon, rho must be strictly positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyBudget: delta must lie in [0, 1)");
  }
}

double budget_ldp_to_zcdp(double epsilon) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("budget_ldp_to_zcdp: epsilon must be > 0");
  }
  return 0.5 * epsilon * epsilon;
}

double budget_zcdp_to_ldp(double rho, double delta) {
  if (rho <= 0.0) {
    throw std::invalid_argument("budget_zcdp_to_ldp: rho must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("budget_zcdp_to_ldp: delta must lie in (0, 1)");
  }
  return rho + std::sqrt(2.0 * rho * std::log(2.0 / delta));
}

namespace {
MechanismKind make_kind(MechanismFamily family, double param,
                        const char* what) {
  if (param <= 0.0 || !std::isfinite(param)) {
    throw std::invalid_argument(std::string(what) +
                                ": parameter must be strictly positive");
  }
  return MechanismKind{family, param};
}
}  // namespace

MechanismKind MechanismKind::gaussian_noise(double rho) {
  return make_kind(MechanismFamily::kGaussianNoise, rho, "gaussian_noise");
}
MechanismKind MechanismKind::laplace_noise(double epsilon) {
  return make_kind(MechanismFamily::kLaplaceNoise, epsilon, "laplace_noise");
}
MechanismKind MechanismKind::exponential(double epsilon) {
  return make_kind(MechanismFamily::kExponential, epsilon, "exponential");
}
MechanismKind MechanismKind::bit_flip(double epsilon) {
  return make_kind(MechanismFamily::kBitFlip, epsilon, "bit_flip");
}

double MechanismKind::epsilon() const {
  if (family == MechanismFamily::kGaussianNoise) {
    throw std::invalid_argument(
        "MechanismKind: Gaussian noise is parameterized by rho, not epsilon");
  }
  return param;
}

double MechanismKind::rho() const {
  if (family != MechanismFamily::kGaussianNoise) {
    throw std::invalid_argument("MechanismKind: only Gaussian noise has rho");
  }
  return param;
}

std::string MechanismKind::name() const {
  switch (family) {
    case MechanismFamily::kGaussianNoise:
      return "gaussian";
    case MechanismFamily::kLaplaceNoise:
      return "laplace";
    case MechanismFamily::kExponential:
      return "exponential";
    case MechanismFamily::kBitFlip:
      return "bitflip";
  }
  return "unknown";
}

OneHotRecord::OneHotRecord(std::uint32_t index, std::uint32_t dim)
    : index(index), dim(dim) {
  if (dim == 0 || index >= dim) {
    throw std::invalid_argument("OneHotRecord: index must lie in [0, dim)");
  }
}

std::size_t PrivateReport::dim() const {
  if (const auto* v = std::get_if<std::vector<double>>(&payload)) {
    return v->size();
  }
  if (const auto* r = std::get_if<OneHotRecord>(&payload)) return r->dim;
  return std::get<std::vector<bool>>(payload).size();
}

PrivateReport randomize_noise(const OneHotRecord& record, MechanismKind kind,
                              RngStream& rng) {
  std::vector<double> out(record.dim, 0.0);
  out[record.index] = 1.0;
  switch (kind.family) {
    case MechanismFamily::kGaussianNoise: {
      const double stddev = std::sqrt(1.0 / kind.rho());
      for (double& v : out) v += rng.normal(0.0, stddev);
      break;
    }
    case MechanismFamily::kLaplaceNoise: {
      const double scale = 2.0 / kind.epsilon();
      for (double& v : out) v += sample_laplace_sum(1, scale, rng);
      break;
    }
    default:
      throw std::invalid_argument(
          "randomize_noise: kind must be Gaussian or Laplace noise");
  }
  return PrivateReport{kind, std::move(out)};
}

OneHotRecord randomize_exponential(const OneHotRecord& record, double epsilon,
                                   RngStream& rng) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument("randomize_exponential: epsilon must be >= 0");
  }
  const std::uint32_t d = record.dim;
  if (d < 2) {
    throw std::invalid_argument("randomize_exponential: dim must be >= 2");
  }
  const double e = std::exp(epsilon);
  const double keep = e / (e + static_cast<double>(d) - 1.0);
  const double u = rng.uniform();
  if (u < keep) return record;
  // Remaining mass splits evenly over the other d - 1 categories.
  const double v = (u - keep) / (1.0 - keep);
  std::uint32_t other = static_cast<std::uint32_t>(
      v * static_cast<double>(d - 1));
  if (other >= d - 1) other = d - 2;
  const std::uint32_t category = other < record.index ? other : other + 1;
  return OneHotRecord(category, d);
}

PrivateReport randomize_bitflip(const OneHotRecord& record, double epsilon,
                                RngStream& rng) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument("randomize_bitflip: epsilon must be >= 0");
  }
  const double keep = std::exp(0.5 * epsilon) / (std::exp(0.5 * epsilon) + 1.0);
  std::vector<bool> bits(record.dim);
  for (std::uint32_t j = 0; j < record.dim; ++j) {
    const bool x = (j == record.index);
    bits[j] = rng.uniform() < keep ? x : !x;
  }
  // epsilon = 0 is allowed here (uniform bits), so build the kind directly
  // instead of going through the strictly-positive factory.
  return PrivateReport{MechanismKind{MechanismFamily::kBitFlip, epsilon},
                       std::move(bits)};
}

NoisyHistogram aggregate(std::span<const PrivateReport> reports) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate: empty report list");
  }
  const MechanismFamily family = reports.front().mechanism.family;
  const std::size_t d = reports.front().dim();
  NoisyHistogram out;
  out.values.assign(d, 0.0);
  out.n = static_cast<std::int64_t>(reports.size());
  for (const PrivateReport& r : reports) {
    if (r.mechanism.family != family || r.dim() != d) {
      throw std::invalid_argument(
          "aggregate: reports mix mechanisms or dimensions");
    }
    if (const auto* vec = std::get_if<std::vector<double>>(&r.payload)) {
      for (std::size_t j = 0; j < d; ++j) out.values[j] += (*vec)[j];
    } else if (const auto* one = std::get_if<OneHotRecord>(&r.payload)) {
      out.values[one->index] += 1.0;
    } else {
      const auto& bits = std::get<std::vector<bool>>(r.payload);
      for (std::size_t j = 0; j < d; ++j) {
        if (bits[j]) out.values[j] += 1.0;
      }
    }
  }
  return out;
}

ProbabilityVector pushed_exp_distribution(const ProbabilityVector& p,
                                          double epsilon) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument(
        "pushed_exp_distribution: epsilon must be >= 0");
  }
  const double d = static_cast<double>(p.dim());
  const double e = std::exp(epsilon);
  const double denom = e + d - 1.0;
  std::vector<double> out(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) {
    out[j] = (p[j] * e + (1.0 - p[j])) / denom;
  }
  return ProbabilityVector(std::move(out));
}

std::vector<double> pushed_bitflip_mean(const ProbabilityVector& p,
                                        double epsilon) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument("pushed_bitflip_mean: epsilon must be >= 0");
  }
  const double eh = std::exp(0.5 * epsilon);
  std::vector<double> out(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) {
    out[j] = ((eh - 1.0) * p[j] + 1.0) / (eh + 1.0);
  }
  return out;
}

double bitflip_alpha(double epsilon) {
  const double eh = std::exp(0.5 * epsilon);
  return (eh - 1.0) / (eh + 1.0);
}

SymMatrix bitflip_covariance(const ProbabilityVector& p, double epsilon) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument("bitflip_covariance: epsilon must be >= 0");
  }
  p.require_interior("bitflip_covariance");
  const std::size_t d = p.dim();
  const double eh = std::exp(0.5 * epsilon);
  const double alpha = bitflip_alpha(epsilon);
  const double iso = eh / ((eh + 1.0) * (eh + 1.0));
  Eigen::MatrixXd sigma(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double multinomial = (i == j ? p[i] : 0.0) - p[i] * p[j];
      sigma(i, j) = alpha * alpha * multinomial + (i == j ? iso : 0.0);
    }
  }
  return SymMatrix(std::move(sigma));
}

}  // namespace ldpchisq
