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

#ifndef LDPCHISQ_REPORT_H_
#define LDPCHISQ_REPORT_H_

#include <cstdint>
#include <string>

#include "ldpchisq/gof.h"
#include "ldpchisq/independence.h"

namespace ldpchisq {

// Machine-readable JSON test report. Every field of the schema is always
// present; inapplicable ones are null:
//   {format_version, test, mechanism, epsilon, rho, delta, n, d, r, c,
//    alpha, statistic, dof, critical_value, p_value, decision,
//    guard_triggered, seed}
// decision is "reject" or "fail_to_reject" and always matches the numeric
// comparison of statistic against critical_value.
std::string report_json(const TestResult& result, std::uint64_t seed);
std::string report_json(const IndTestResult& result, std::uint64_t seed);

}  // namespace ldpchisq

#endif  // LDPCHISQ_REPORT_H_
