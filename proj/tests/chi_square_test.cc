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
#include <stdexcept>

#include <doctest.h>

#include "ldpchisq/rng.h"
#include "oracle_utils.h"

namespace ldpchisq {
namespace {

TEST_CASE("chi2_sf at zero is one") {
  CHECK(chi2_sf(1, 0.0) == doctest::Approx(1.0));
  CHECK(chi2_sf(7, 0.0) == doctest::Approx(1.0));
}

// Frozen expectations recomputed from the quadrature oracle: the stated
// points are the 95% critical values, so the survival probability is 0.05.
TEST_CASE("chi2_sf matches quadrature oracle at the 95% critical values") {
  CHECK(testing::chi2_sf_oracle(3, 7.814728) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(testing::chi2_sf_oracle(9, 16.918978) == doctest::Approx(0.05).epsilon(1e-4));

  CHECK(chi2_sf(3, 7.814728) == doctest::Approx(0.05).epsilon(2e-5));
  CHECK(chi2_sf(9, 16.918978) == doctest::Approx(0.05).epsilon(2e-5));

  for (const int dof : {1, 2, 3, 5, 9, 20}) {
    for (const double x : {0.3, 1.0, 4.0, 11.0, 29.5}) {
      CHECK(chi2_sf(dof, x) ==
            doctest::Approx(testing::chi2_sf_oracle(dof, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("chi2_quantile frozen values") {
  // Oracle bisection values, frozen: 3.8414588, 7.8147279, 1.3862944.
  CHECK(testing::chi2_quantile_oracle(1, 0.95) ==
        doctest::Approx(3.841459).epsilon(1e-5));
  CHECK(testing::chi2_quantile_oracle(3, 0.95) ==
        doctest::Approx(7.814728).epsilon(1e-5));

  CHECK(chi2_quantile(1, 0.95) == doctest::Approx(3.841459).epsilon(1e-5));
  CHECK(chi2_quantile(3, 0.95) == doctest::Approx(7.814728).epsilon(1e-5));
  // chi2 with 2 dof is Exponential(mean 2), so the median is 2 ln 2.
  CHECK(chi2_quantile(2, 0.5) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-7));
}

TEST_CASE("chi2_quantile round-trips with chi2_sf") {
  for (int dof = 1; dof <= 50; ++dof) {
    for (const double prob : {0.01, 0.2, 0.5, 0.9, 0.95, 0.999}) {
      const double x = chi2_quantile(dof, prob);
      CHECK(1.0 - chi2_sf(dof, x) == doctest::Approx(prob).epsilon(1e-8));
    }
  }
}

TEST_CASE("chi-square argument validation") {
  CHECK_THROWS_AS(chi2_sf(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_sf(-3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_sf(2, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(chi2_quantile(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_quantile(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi2_quantile(3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(noncentral_chi2_sf(3, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("noncentral chi-square reduces to central at lambda zero") {
  CHECK(noncentral_chi2_sf(3, 0.0, 7.814728) ==
        doctest::Approx(0.05).epsilon(1e-5));
  CHECK(noncentral_chi2_sf(1, 4.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("noncentral chi-square against Monte-Carlo oracle") {
  // 1e6 draws of (Z1 + sqrt(10))^2 + Z2^2 + Z3^2.
  RngStream rng(20260810, 1);
  const double shift = std::sqrt(10.0);
  const double x = 7.814728;
  const int draws = 1000000;
  int above = 0;
  for (int i = 0; i < draws; ++i) {
    const double a = rng.normal() + shift;
    const double b = rng.normal();
    const double c = rng.normal();
    if (a * a + b * b + c * c > x) ++above;
  }
  const double mc = static_cast<double>(above) / draws;
  const double se = std::sqrt(mc * (1.0 - mc) / draws);
  const double exact = noncentral_chi2_sf(3, 10.0, x);
  CHECK(std::fabs(exact - mc) < 3.0 * se);
}

TEST_CASE("noncentral chi-square is monotone in lambda") {
  const double x = 9.3;
  double prev = noncentral_chi2_sf(4, 0.0, x);
  for (double lambda = 0.5; lambda < 40.0; lambda += 0.5) {
    const double cur = noncentral_chi2_sf(4, lambda, x);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("noncentral chi-square handles large lambda without underflow") {
  const double v = noncentral_chi2_sf(3, 500.0, 400.0);
  CHECK(v > 0.9);
  CHECK(v <= 1.0);
  CHECK(noncentral_chi2_sf(39, 262.0, 54.572) == doctest::Approx(1.0).epsilon(1e-6));
}

}  // namespace
}  // namespace ldpchisq
