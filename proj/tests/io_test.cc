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

#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "ldpchisq/error.h"
#include "ldpchisq/record_io.h"
#include "ldpchisq/report.h"

namespace ldpchisq {
namespace {

TEST_CASE("category records parse with range checks and line numbers") {
  std::istringstream ok("category\n0\n3\n1\n");
  const auto records = read_category_records(ok, 4);
  CHECK(records.size() == 3);
  CHECK(records[1].index == 3);

  std::istringstream missing_header("0\n1\n");
  CHECK_THROWS_AS(read_category_records(missing_header, 4), ParseError);

  std::istringstream out_of_range("category\n0\n9\n");
  try {
    read_category_records(out_of_range, 4);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  std::istringstream not_int("category\nfoo\n");
  CHECK_THROWS_AS(read_category_records(not_int, 4), ParseError);

  std::istringstream empty("category\n");
  CHECK_THROWS_AS(read_category_records(empty, 4), ParseError);

  std::istringstream with_comment("# format_version=1\ncategory\n2\n");
  CHECK(read_category_records(with_comment, 4).size() == 1);
}

TEST_CASE("pair records parse with range checks") {
  std::istringstream ok("row,col\n0,0\n1,2\n");
  const auto records = read_pair_records(ok, 2, 3);
  CHECK(records.size() == 2);
  CHECK(records[1].col == 2);

  std::istringstream bad_row("row,col\n5,0\n");
  CHECK_THROWS_AS(read_pair_records(bad_row, 2, 3), ParseError);

  std::istringstream one_field("row,col\n1\n");
  CHECK_THROWS_AS(read_pair_records(one_field, 2, 3), ParseError);
}

TEST_CASE("probability files parse and validate") {
  std::istringstream ok("# null distribution\n0.25\n0.25\n0.25\n0.25\n");
  const ProbabilityVector p = read_probability_file(ok);
  CHECK(p.dim() == 4);

  std::istringstream bad_sum("0.5\n0.1\n");
  CHECK_THROWS_AS(read_probability_file(bad_sum), std::invalid_argument);

  std::istringstream not_num("0.5\nzebra\n");
  CHECK_THROWS_AS(read_probability_file(not_num), ParseError);
}

TEST_CASE("private report csv shapes per mechanism") {
  std::vector<PrivateReport> exp_reports;
  exp_reports.push_back(
      PrivateReport{MechanismKind::exponential(1.0), OneHotRecord(2, 4)});
  const std::string exp_csv = private_reports_to_csv(exp_reports);
  CHECK(exp_csv == "# format_version=1\ncategory\n2\n");

  std::vector<PrivateReport> bit_reports;
  bit_reports.push_back(PrivateReport{
      MechanismKind::bit_flip(1.0), std::vector<bool>{true, false, true}});
  const std::string bit_csv = private_reports_to_csv(bit_reports);
  CHECK(bit_csv == "# format_version=1\nbits\n101\n");

  std::vector<PrivateReport> noise_reports;
  noise_reports.push_back(PrivateReport{MechanismKind::gaussian_noise(1.0),
                                        std::vector<double>{1.5, -0.25}});
  const std::string noise_csv = private_reports_to_csv(noise_reports);
  CHECK(noise_csv.find("v0,v1\n") != std::string::npos);
  CHECK(noise_csv.find("1.5,-0.25\n") != std::string::npos);
}

TEST_CASE("gof report json is schema complete") {
  TestResult r;
  r.statistic = 3.5;
  r.dof = 3;
  r.critical_value = 7.81;
  r.p_value = 0.32;
  r.decision = Decision::kFailToReject;
  r.method = MechanismKind::exponential(2.0);
  r.n = 1000;
  r.d = 4;
  r.alpha = 0.05;
  const auto j = nlohmann::json::parse(report_json(r, 99));
  for (const char* key :
       {"format_version", "test", "mechanism", "epsilon", "rho", "delta", "n",
        "d", "r", "c", "alpha", "statistic", "dof", "critical_value",
        "p_value", "decision", "guard_triggered", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["test"] == "gof");
  CHECK(j["mechanism"] == "exponential");
  CHECK(j["epsilon"] == 2.0);
  CHECK(j["rho"].is_null());
  CHECK(j["r"].is_null());
  CHECK(j["decision"] == "fail_to_reject");
  CHECK(j["guard_triggered"] == false);
  CHECK(j["seed"] == 99);
}

TEST_CASE("ind report json carries the guard and shape") {
  IndTestResult r;
  r.statistic = 0.0;
  r.dof = 1;
  r.critical_value = 3.84;
  r.decision = Decision::kFailToReject;
  r.method = MechanismKind::gaussian_noise(2.0);
  r.n = 20;
  r.rows = 2;
  r.cols = 2;
  r.alpha = 0.05;
  r.guard_triggered = true;
  const auto j = nlohmann::json::parse(report_json(r, 7));
  CHECK(j["test"] == "ind");
  CHECK(j["rho"] == 2.0);
  CHECK(j["epsilon"].is_null());
  CHECK(j["d"].is_null());
  CHECK(j["r"] == 2);
  CHECK(j["guard_triggered"] == true);
  CHECK(j["p_value"].is_null());
}

}  // namespace
}  // namespace ldpchisq
