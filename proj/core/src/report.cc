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

#include "ldpchisq/report.h"

#include <json.hpp>

namespace ldpchisq {
namespace {

using nlohmann::json;

void fill_budget(json& j, const MechanismKind& method) {
  j["epsilon"] = nullptr;
  j["rho"] = nullptr;
  j["delta"] = nullptr;
  if (method.family == MechanismFamily::kGaussianNoise) {
    j["rho"] = method.param;
  } else {
    j["epsilon"] = method.param;
  }
}

json base_report(const MechanismKind& method, std::uint64_t seed) {
  json j;
  j["format_version"] = 1;
  j["mechanism"] = method.name();
  j["seed"] = seed;
  fill_budget(j, method);
  return j;
}

}  // namespace

std::string report_json(const TestResult& result, std::uint64_t seed) {
  json j = base_report(result.method, seed);
  j["test"] = "gof";
  j["n"] = result.n;
  j["d"] = result.d;
  j["r"] = nullptr;
  j["c"] = nullptr;
  j["alpha"] = result.alpha;
  j["statistic"] = result.statistic;
  j["dof"] = result.dof;
  j["critical_value"] = result.critical_value;
  j["p_value"] = result.p_value.has_value() ? json(*result.p_value) : json();
  j["decision"] = result.decision == Decision::kReject ? "reject"
                                                       : "fail_to_reject";
  j["guard_triggered"] = false;
  if (result.mc_rank.has_value()) j["mc_rank"] = *result.mc_rank;
  return j.dump(2);
}

std::string report_json(const IndTestResult& result, std::uint64_t seed) {
  json j = base_report(result.method, seed);
  j["test"] = "ind";
  j["n"] = result.n;
  j["d"] = nullptr;
  j["r"] = result.rows;
  j["c"] = result.cols;
  j["alpha"] = result.alpha;
  j["statistic"] = result.statistic;
  j["dof"] = result.dof;
  j["critical_value"] = result.critical_value;
  j["p_value"] = result.p_value.has_value() ? json(*result.p_value) : json();
  j["decision"] = result.decision == Decision::kReject ? "reject"
                                                       : "fail_to_reject";
  j["guard_triggered"] = result.guard_triggered;
  return j.dump(2);
}

}  // namespace ldpchisq
