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

#include "ldpchisq/types.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ldpchisq {

namespace {
constexpr double kSimplexSumTolerance = 1e-9;
}

ProbabilityVector::ProbabilityVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("ProbabilityVector: empty");
  }
  double sum = 0.0;
  for (double e : entries_) {
    if (!std::isfinite(e) || e < 0.0) {
      throw std::invalid_argument(
          "ProbabilityVector: entries must be finite and nonnegative");
    }
    sum += e;
  }
  if (std::fabs(sum - 1.0) > kSimplexSumTolerance) {
    throw std::invalid_argument("ProbabilityVector: entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t d) {
  if (d == 0) throw std::invalid_argument("uniform: d must be positive");
  return ProbabilityVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

bool ProbabilityVector::strictly_interior(double floor) const {
  for (double e : entries_) {
    if (e <= floor) return false;
  }
  return true;
}

void ProbabilityVector::require_interior(const char* what) const {
  if (!strictly_interior()) {
    throw std::invalid_argument(std::string(what) +
                                ": probability vector must be strictly "
                                "interior (all entries > 0)");
  }
}

ProbabilityVector clamp_to_interior(std::vector<double> raw, double floor) {
  if (raw.empty()) throw std::invalid_argument("clamp_to_interior: empty");
  double sum = 0.0;
  for (double& v : raw) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("clamp_to_interior: non-finite entry");
    }
    if (v < floor) v = floor;
    sum += v;
  }
  for (double& v : raw) v /= sum;
  return ProbabilityVector(std::move(raw));
}

Histogram Histogram::from_counts(std::vector<std::int64_t> counts) {
  Histogram h;
  h.counts = std::move(counts);
  h.n = std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0});
  h.validate();
  return h;
}

void Histogram::validate() const {
  if (counts.empty()) throw std::invalid_argument("Histogram: empty");
  std::int64_t sum = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("Histogram: negative count");
    sum += c;
  }
  if (sum != n) {
    throw std::invalid_argument("Histogram: counts sum to " +
                                std::to_string(sum) + ", expected n = " +
                                std::to_string(n));
  }
}

NoisyHistogram NoisyHistogram::from_histogram(const Histogram& h) {
  h.validate();
  NoisyHistogram nh;
  nh.values.assign(h.counts.begin(), h.counts.end());
  nh.n = h.n;
  return nh;
}

void NoisyHistogram::validate() const {
  if (values.empty()) throw std::invalid_argument("NoisyHistogram: empty");
  if (n < 1) throw std::invalid_argument("NoisyHistogram: n must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("NoisyHistogram: non-finite value");
    }
  }
}

}  // namespace ldpchisq
