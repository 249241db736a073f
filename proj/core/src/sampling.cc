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

#include "ldpchisq/sampling.h"

#include <stdexcept>

namespace ldpchisq {

std::uint32_t sample_category(const ProbabilityVector& p, RngStream& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  const std::size_t d = p.dim();
  for (std::size_t j = 0; j + 1 < d; ++j) {
    cum += p[j];
    if (u < cum) return static_cast<std::uint32_t>(j);
  }
  return static_cast<std::uint32_t>(d - 1);
}

Histogram sample_histogram(std::int64_t n, const ProbabilityVector& p,
                           RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_histogram: n must be >= 1");
  const std::size_t d = p.dim();
  Histogram h;
  h.counts.assign(d, 0);
  h.n = n;
  std::int64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t j = 0; j + 1 < d && remaining > 0; ++j) {
    const double cond = mass_left > 0.0 ? p[j] / mass_left : 1.0;
    const std::int64_t c = rng.binomial(remaining, cond);
    h.counts[j] = c;
    remaining -= c;
    mass_left -= p[j];
  }
  h.counts[d - 1] = remaining;
  return h;
}

double sample_laplace_sum(std::int64_t n, double scale, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_laplace_sum: n must be >= 1");
  if (scale <= 0.0) {
    throw std::invalid_argument("sample_laplace_sum: scale must be positive");
  }
  const double shape = static_cast<double>(n);
  return rng.gamma(shape, scale) - rng.gamma(shape, scale);
}

}  // namespace ldpchisq
