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

#ifndef LDPCHISQ_SAMPLING_H_
#define LDPCHISQ_SAMPLING_H_

#include <cstdint>

#include "ldpchisq/rng.h"
#include "ldpchisq/types.h"

namespace ldpchisq {

// One Multinomial(1, p) draw: the sampled category index.
std::uint32_t sample_category(const ProbabilityVector& p, RngStream& rng);

// Multinomial(n, p) counts via sequential conditional binomials. Exact, no
// setup cost. Requires n >= 1.
Histogram sample_histogram(std::int64_t n, const ProbabilityVector& p,
                           RngStream& rng);

// One draw of the sum of n i.i.d. Laplace(scale) variables, sampled exactly
// as the difference of two Gamma(n, scale) draws. Requires n >= 1, scale > 0.
double sample_laplace_sum(std::int64_t n, double scale, RngStream& rng);

}  // namespace ldpchisq

#endif  // LDPCHISQ_SAMPLING_H_
