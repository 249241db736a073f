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

#include "ldpchisq/chi_square.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ldpchisq {
namespace detail {
namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

// Lower regularized gamma by power series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by modified Lentz continued fraction, for
// x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
    throw std::invalid_argument("regularized_gamma_p: need a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
    throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

}  // namespace detail

namespace {

void check_dof(int dof) {
  if (dof < 1) throw std::invalid_argument("chi-square: dof must be positive");
}

// Chi-square density, used as the Newton derivative of the CDF.
double chi2_pdf(int dof, double x) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * dof;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::numbers::ln2 -
                  std::lgamma(a));
}

}  // namespace

double chi2_sf(int dof, double x) {
  check_dof(dof);
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::invalid_argument("chi2_sf: x must be finite and >= 0");
  }
  return detail::regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_cdf(int dof, double x) {
  check_dof(dof);
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::invalid_argument("chi2_cdf: x must be finite and >= 0");
  }
  return detail::regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(int dof, double prob) {
  check_dof(dof);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("chi2_quantile: prob must lie in (0, 1)");
  }
  // Bracket the root. The mean is dof, so expand up from there for upper
  // quantiles; the lower end starts at zero.
  double lo = 0.0;
  double hi = static_cast<double>(dof);
  while (chi2_cdf(dof, hi) < prob) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = chi2_cdf(dof, x) - prob;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double deriv = chi2_pdf(dof, x);
    double next = x - (deriv > 0.0 ? f / deriv : 0.0);
    if (!(next > lo && next < hi) || deriv <= 0.0) {
      next = 0.5 * (lo + hi);  // bisection fallback
    }
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 1e-12 * (1.0 + std::fabs(x)) || hi - lo <= 1e-13 * (1.0 + hi)) {
      break;
    }
  }
  return x;
}

double noncentral_chi2_sf(int dof, double lambda, double x) {
  check_dof(dof);
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw std::invalid_argument("noncentral_chi2_sf: lambda must be >= 0");
  }
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::invalid_argument("noncentral_chi2_sf: x must be >= 0");
  }
  if (x == 0.0) return 1.0;
  if (lambda == 0.0) return chi2_sf(dof, x);

  const double half = 0.5 * lambda;
  const auto central_term = [&](long long k) {
    return detail::regularized_gamma_q(0.5 * dof + static_cast<double>(k),
                                       0.5 * x);
  };
  const auto log_weight = [&](long long k) {
    return -half + static_cast<double>(k) * std::log(half) -
           std::lgamma(static_cast<double>(k) + 1.0);
  };

  // Sum Poisson(lambda/2)-weighted central survival terms, expanding outward
  // from the modal index so large lambda cannot underflow the whole sum.
  const long long k0 = static_cast<long long>(half);
  double result = 0.0;
  double total_weight = 0.0;

  double w = std::exp(log_weight(k0));
  for (long long k = k0; k < k0 + 10000; ++k) {
    result += w * central_term(k);
    total_weight += w;
    w *= half / static_cast<double>(k + 1);
    if (w < 1e-16 && total_weight > 0.0) break;
  }
  if (k0 > 0) {
    w = std::exp(log_weight(k0 - 1));
    for (long long k = k0 - 1; k >= 0; --k) {
      result += w * central_term(k);
      total_weight += w;
      if (w < 1e-16) break;
      w *= static_cast<double>(k) / half;
    }
  }
  // total_weight approximates 1; remaining Poisson mass is below 1e-14 and
  // each dropped term is at most that mass.
  if (result > 1.0) result = 1.0;
  return result;
}

}  // namespace ldpchisq
