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

#ifndef LDPCHISQ_TYPES_H_
#define LDPCHISQ_TYPES_H_

#include <cstdint>
#include <vector>

namespace ldpchisq {

// Point on the probability simplex over d categories. Construction validates
// that entries are nonnegative and sum to 1 within 1e-9.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries);
  static ProbabilityVector uniform(std::size_t d);

  std::size_t dim() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }

  // True when every entry exceeds `floor`.
  bool strictly_interior(double floor = 0.0) const;
  // Throws std::invalid_argument mentioning `what` unless strictly interior.
  void require_interior(const char* what) const;

 private:
  std::vector<double> entries_;
};

// Floors the raw values at `floor` entrywise and renormalizes, producing a
// strictly interior simplex point. Used to clamp marginal estimates whose raw
// (debiased) values may fall outside the simplex.
ProbabilityVector clamp_to_interior(std::vector<double> raw,
                                    double floor = 1e-6);

// Pair of marginal distributions: pi1 over r row categories, pi2 over c
// column categories.
struct MarginalPair {
  ProbabilityVector pi1;
  ProbabilityVector pi2;
};

// Integer count vector over d categories; counts sum to n.
struct Histogram {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  static Histogram from_counts(std::vector<std::int64_t> counts);
  std::size_t dim() const { return counts.size(); }
  void validate() const;
};

// Real-valued histogram: counts plus additive noise, or debiasable randomized
// responses. Values are unconstrained (noise may push them negative); n is
// the underlying number of contributing records.
struct NoisyHistogram {
  std::vector<double> values;
  std::int64_t n = 0;

  static NoisyHistogram from_histogram(const Histogram& h);
  std::size_t dim() const { return values.size(); }
  void validate() const;
};

}  // namespace ldpchisq

#endif  // LDPCHISQ_TYPES_H_
