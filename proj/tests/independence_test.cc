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

#include "ldpchisq/independence.h"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "ldpchisq/error.h"
#include "ldpchisq/sampling.h"
#include "ldpchisq/simplex_opt.h"
#include "ldpchisq/simulation.h"
#include "oracle_utils.h"

namespace ldpchisq {
namespace {

NoisyContingencyTable make_table(int rows, int cols, std::vector<double> values,
                                 std::int64_t n) {
  NoisyContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.values = std::move(values);
  t.n = n;
  return t;
}

MarginalPair make_marginals(std::vector<double> a, std::vector<double> b) {
  return MarginalPair{ProbabilityVector(std::move(a)),
                      ProbabilityVector(std::move(b))};
}

// Plain-loop quadratic form with a Gauss-Jordan inverse, independent of the
// library's linear algebra path.
double dense_ind_noise_oracle(const NoisyContingencyTable& t,
                              const MarginalPair& theta,
                              const MarginalPair& plug, double rho) {
  const int d = t.rows * t.cols;
  std::vector<double> p(d), ptheta(d);
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      p[i * t.cols + j] = plug.pi1[i] * plug.pi2[j];
      ptheta[i * t.cols + j] = theta.pi1[i] * theta.pi2[j];
    }
  }
  // mhat = Diag(p) - p p' + I/rho
  std::vector<std::vector<double>> a(d, std::vector<double>(2 * d, 0.0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a[i][j] = (i == j ? p[i] + 1.0 / rho : 0.0) - p[i] * p[j];
    }
    a[i][d + i] = 1.0;
  }
  for (int col = 0; col < d; ++col) {  // Gauss-Jordan, partial pivot
    int pivot = col;
    for (int r = col + 1; r < d; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    const double div = a[col][col];
    for (int j = 0; j < 2 * d; ++j) a[col][j] /= div;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double factor = a[r][col];
      for (int j = 0; j < 2 * d; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  // v = Pi (y - n ptheta), quad = v' inv v computed as (Pi u)' inv (Pi u).
  std::vector<double> u(d);
  double mean = 0.0;
  for (int k = 0; k < d; ++k) {
    u[k] = t.values[k] - static_cast<double>(t.n) * ptheta[k];
    mean += u[k];
  }
  mean /= d;
  for (int k = 0; k < d; ++k) u[k] -= mean;
  double quad = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) quad += u[i] * a[i][d + j] * u[j];
  }
  return quad / static_cast<double>(t.n);
}

TEST_CASE("product model closed forms") {
  const ProbabilityVector pm =
      product_model(make_marginals({0.5, 0.5}, {0.5, 0.5}));
  for (int k = 0; k < 4; ++k) CHECK(pm[k] == doctest::Approx(0.25));

  const ProbabilityVector degenerate =
      product_model(make_marginals({1.0, 0.0}, {0.3, 0.7}));
  CHECK(degenerate[0] == doctest::Approx(0.3));
  CHECK(degenerate[1] == doctest::Approx(0.7));
  CHECK(degenerate[2] == doctest::Approx(0.0));
  CHECK(degenerate[3] == doctest::Approx(0.0));

  RngStream rng(600, 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(3), b(4);
    double sa = 0.0, sb = 0.0;
    for (double& x : a) sa += (x = 0.1 + rng.uniform());
    for (double& x : b) sb += (x = 0.1 + rng.uniform());
    for (double& x : a) x /= sa;
    for (double& x : b) x /= sb;
    const ProbabilityVector pm2 = product_model(make_marginals(a, b));
    double sum = 0.0;
    for (std::size_t k = 0; k < pm2.dim(); ++k) sum += pm2[k];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("estimate_marginals_noise on a clean table and clamping") {
  const auto est = estimate_marginals_noise(
      make_table(2, 2, {25.0, 25.0, 25.0, 25.0}, 100));
  CHECK(est.pi1[0] == doctest::Approx(0.5));
  CHECK(est.pi2[0] == doctest::Approx(0.5));

  // Noise pushing a marginal negative gets floored and renormalized.
  const auto clamped =
      estimate_marginals_noise(make_table(2, 2, {60.0, 50.0, -8.0, 2.0}, 100));
  CHECK(clamped.pi1.strictly_interior());
  CHECK(clamped.pi2.strictly_interior());
  double sum = clamped.pi1[0] + clamped.pi1[1];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(
      estimate_marginals_noise(make_table(2, 2, {-40.0, 10.0, 10.0, 10.0}, 100)),
      DegenerateSampleError);
}

TEST_CASE("estimate_marginals_noise is consistent under gaussian noise") {
  RngStream rng(601, 0);
  const double rho = 2.0;
  const std::int64_t n = 10000;
  const MarginalPair truth = make_marginals({0.3, 0.7}, {0.6, 0.4});
  const ProbabilityVector cells = product_model(truth);
  const int reps = 10000;
  double sum1 = 0.0;
  for (int r = 0; r < reps; ++r) {
    NoisyContingencyTable t = make_table(2, 2, {0, 0, 0, 0}, n);
    const Histogram h = sample_histogram(n, cells, rng);
    for (int k = 0; k < 4; ++k) {
      t.values[k] = static_cast<double>(h.counts[k]) +
                    rng.normal(0.0, std::sqrt(static_cast<double>(n) / rho));
    }
    sum1 += estimate_marginals_noise(t).pi1[0];
  }
  // Marginal variance is dominated by the multinomial term ~ p(1-p)/n.
  const double se = 4.0 * std::sqrt(0.3 * 0.7 / (n * static_cast<double>(reps))) +
                    4.0 * std::sqrt(2.0 / rho / n) / std::sqrt(reps);
  CHECK(std::fabs(sum1 / reps - 0.3) < se + 1e-3);
}

TEST_CASE("stat_ind_noise zero at exact fit and shift invariant") {
  const MarginalPair theta = make_marginals({0.4, 0.6}, {0.5, 0.5});
  const ProbabilityVector cells = product_model(theta);
  const std::int64_t n = 400;
  std::vector<double> values(4);
  for (int k = 0; k < 4; ++k) values[k] = n * cells[k];
  const NoisyContingencyTable exact = make_table(2, 2, values, n);
  CHECK(stat_ind_noise(exact, theta, theta, 2.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (double& v : values) v += 3.25;
  const NoisyContingencyTable shifted = make_table(2, 2, values, n);
  CHECK(stat_ind_noise(shifted, theta, theta, 2.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("stat_ind_noise matches an independently coded dense oracle") {
  RngStream rng(602, 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> values(4);
    for (double& v : values) v = 80.0 + 30.0 * rng.normal();
    const NoisyContingencyTable t = make_table(2, 2, values, 300);
    const MarginalPair plug = estimate_marginals_noise(t);
    const MarginalPair theta =
        make_marginals({0.45, 0.55}, {0.52, 0.48});
    const double lib = stat_ind_noise(t, theta, plug, 1.7);
    const double oracle = dense_ind_noise_oracle(t, theta, plug, 1.7);
    CHECK(lib == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("pushed exponential table closed forms") {
  const MarginalPair uniform = make_marginals({0.5, 0.5}, {0.5, 0.5});
  const ProbabilityVector fixed = pushed_table_exp(uniform, std::log(3.0));
  for (int k = 0; k < 4; ++k) CHECK(fixed[k] == doctest::Approx(0.25));

  const MarginalPair skew = make_marginals({0.8, 0.2}, {0.6, 0.4});
  const ProbabilityVector nearly = pushed_table_exp(skew, 40.0);
  const ProbabilityVector raw = product_model(skew);
  for (int k = 0; k < 4; ++k) CHECK(std::fabs(nearly[k] - raw[k]) < 1e-9);

  const double eps = 1.2;
  const double beta = 1.0 / (std::exp(eps) + 3.0);
  const ProbabilityVector pushed = pushed_table_exp(skew, eps);
  for (int k = 0; k < 4; ++k) CHECK(pushed[k] >= beta - 1e-12);
}

TEST_CASE("estimate_marginals_exp inverts the pushed table exactly") {
  const double eps = 1.4;
  const MarginalPair truth = make_marginals({0.35, 0.65}, {0.55, 0.45});
  const ProbabilityVector pushed = pushed_table_exp(truth, eps);
  const std::int64_t n = 5000;
  std::vector<double> values(4);
  for (int k = 0; k < 4; ++k) values[k] = n * pushed[k];
  const MarginalPair est =
      estimate_marginals_exp(make_table(2, 2, values, n), eps);
  CHECK(est.pi1[0] == doctest::Approx(0.35).epsilon(1e-9));
  CHECK(est.pi2[0] == doctest::Approx(0.55).epsilon(1e-9));

  // Heavy noise: still a strictly interior simplex point after clamping.
  const MarginalPair noisy =
      estimate_marginals_exp(make_table(2, 2, {5000, 0, 0, 0}, 5000), eps);
  CHECK(noisy.pi1.strictly_interior());
  CHECK(noisy.pi2.strictly_interior());
}

TEST_CASE("estimate_marginals_exp consistency at n = 1e5") {
  RngStream rng(603, 0);
  const double eps = 2.0;
  const MarginalPair truth = make_marginals({0.3, 0.7}, {0.55, 0.45});
  const ProbabilityVector pushed = pushed_table_exp(truth, eps);
  const std::int64_t n = 100000;
  const Histogram h = sample_histogram(n, pushed, rng);
  NoisyContingencyTable t = make_table(2, 2, {0, 0, 0, 0}, n);
  for (int k = 0; k < 4; ++k) t.values[k] = static_cast<double>(h.counts[k]);
  const MarginalPair est = estimate_marginals_exp(t, eps);
  // Debiasing scales multinomial noise by 1/(beta (e^eps - 1)).
  const double eps_scale =
      1.0 / ((std::exp(eps) - 1.0) / (std::exp(eps) + 3.0));
  const double se = 4.0 * eps_scale * std::sqrt(0.25 / n);
  CHECK(std::fabs(est.pi1[0] - 0.3) < se);
  CHECK(std::fabs(est.pi2[0] - 0.55) < se);
}

TEST_CASE("exponential closed form is a stationary point of the exact-minimum quadratic") {
  RngStream rng(604, 0);
  const double eps = 2.0;
  const MarginalPair truth = make_marginals({0.4, 0.6}, {0.5, 0.5});
  const ProbabilityVector pushed = pushed_table_exp(truth, eps);
  const std::int64_t n = 10000;
  for (int trial = 0; trial < 5; ++trial) {
    const Histogram h = sample_histogram(n, pushed, rng);
    NoisyContingencyTable t = make_table(2, 2, {0, 0, 0, 0}, n);
    for (int k = 0; k < 4; ++k) t.values[k] = static_cast<double>(h.counts[k]);
    const MarginalPair est = estimate_marginals_exp(t, eps);

    const auto objective = [&](const MarginalPair& theta) {
      return ind_exp_quadratic(t, theta, est, eps);
    };
    // Finite-difference tangent gradient at the closed form.
    const double h_step = 1e-6;
    double grad_norm = 0.0;
    for (int block = 0; block < 2; ++block) {
      std::vector<double> a = est.pi1.entries();
      std::vector<double> b = est.pi2.entries();
      std::vector<double>& target = block == 0 ? a : b;
      target[0] += h_step;
      target[1] -= h_step;
      const double up = objective(make_marginals(a, b));
      target[0] -= 2.0 * h_step;
      target[1] += 2.0 * h_step;
      const double down = objective(make_marginals(a, b));
      const double g = (up - down) / (2.0 * h_step);
      grad_norm += g * g;
    }
    CHECK(std::sqrt(grad_norm) < 1e-6);

    // An optimizer started away from the estimates finds nothing better.
    const double at_closed = objective(est);
    const MarginalPair far_init = make_marginals({0.25, 0.75}, {0.7, 0.3});
    const SimplexMinResult min =
        minimize_product_simplex(objective, far_init);
    CHECK(min.value >= at_closed - 1e-6);
  }
}

TEST_CASE("pushed bit-flip table closed forms") {
  const double eps = 2.0 * std::log(3.0);
  const MarginalPair uniform = make_marginals({0.5, 0.5}, {0.5, 0.5});
  const std::vector<double> cells = pushed_table_bitflip(uniform, eps);
  for (int k = 0; k < 4; ++k) CHECK(cells[k] == doctest::Approx(0.375));

  // Entries sum to alpha + rc / (e^{eps/2} + 1).
  const MarginalPair skew = make_marginals({0.7, 0.3}, {0.2, 0.8});
  const std::vector<double> cells2 = pushed_table_bitflip(skew, 1.3);
  double sum = 0.0;
  for (double c : cells2) sum += c;
  const double eh = std::exp(0.65);
  CHECK(sum ==
        doctest::Approx(bitflip_alpha(1.3) + 4.0 / (eh + 1.0)).epsilon(1e-12));

  const std::vector<double> nearly = pushed_table_bitflip(skew, 40.0);
  const ProbabilityVector raw = product_model(skew);
  for (int k = 0; k < 4; ++k) CHECK(std::fabs(nearly[k] - raw[k]) < 1e-8);
}

TEST_CASE("estimate_marginals_bitflip inverts the pushed table") {
  const double eps = 1.8;
  const MarginalPair truth = make_marginals({0.45, 0.55}, {0.7, 0.3});
  const std::vector<double> cells = pushed_table_bitflip(truth, eps);
  const std::int64_t n = 4000;
  std::vector<double> values(4);
  for (int k = 0; k < 4; ++k) values[k] = n * cells[k];
  const MarginalPair est =
      estimate_marginals_bitflip(make_table(2, 2, values, n), eps);
  CHECK(est.pi1[0] == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(est.pi2[0] == doctest::Approx(0.7).epsilon(1e-9));

  const MarginalPair clamped =
      estimate_marginals_bitflip(make_table(2, 2, {0, 0, 4000, 4000}, 4000),
                                 eps);
  CHECK(clamped.pi1.strictly_interior());
}

TEST_CASE("guard fires on tiny samples and forces fail-to-reject") {
  // n = 12 with uniform-ish marginals gives expected cells of about 3 <= 5.
  const IndTestResult res = ind_exp_test_from_counts(
      make_table(2, 2, {3.0, 3.0, 3.0, 3.0}, 12), 2.0, 0.05);
  CHECK(res.guard_triggered);
  CHECK(res.decision == Decision::kFailToReject);
  CHECK_FALSE(res.p_value.has_value());
  CHECK(res.dof == 1);
}

TEST_CASE("ind test results are decision-consistent and dof is (r-1)(c-1)") {
  RngStream rng(605, 0);
  const ProbabilityVector cells = ProbabilityVector::uniform(6);
  const std::int64_t n = 4000;
  std::vector<PairRecord> records;
  RngStream data_rng(606, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint32_t k = sample_category(cells, data_rng);
    records.push_back(PairRecord{k / 3, k % 3});
  }
  const IndTestResult noise = ind_noise_test(records, 2, 3, 2.0, 0.05, rng);
  CHECK(noise.dof == 2);
  CHECK((noise.decision == Decision::kReject) ==
        (noise.statistic > noise.critical_value));
  CHECK(noise.statistic >= 0.0);

  const IndTestResult exp_res = ind_exp_test(records, 2, 3, 2.0, 0.05, rng);
  CHECK(exp_res.dof == 2);
  CHECK((exp_res.decision == Decision::kReject) ==
        (exp_res.statistic > exp_res.critical_value));

  const IndTestResult bf = ind_bitflip_test(records, 2, 3, 2.0, 0.05, rng);
  CHECK(bf.dof == 2);
  CHECK((bf.decision == Decision::kReject) ==
        (bf.statistic > bf.critical_value));
}

TEST_CASE("minimized statistic never exceeds the plug-in objective") {
  RngStream rng(607, 0);
  const ProbabilityVector cells = ProbabilityVector::uniform(4);
  const std::int64_t n = 8000;
  for (int trial = 0; trial < 3; ++trial) {
    RngStream s = rng.substream(trial);
    NoisyContingencyTable t = make_table(2, 2, {0, 0, 0, 0}, n);
    const Histogram h = sample_histogram(n, cells, s);
    const double rho = 2.0;
    for (int k = 0; k < 4; ++k) {
      t.values[k] = static_cast<double>(h.counts[k]) +
                    s.normal(0.0, std::sqrt(static_cast<double>(n) / rho));
    }
    const MarginalPair plug = estimate_marginals_noise(t);
    const double at_plug = stat_ind_noise(t, plug, plug, rho);
    const IndTestResult res = ind_noise_test_from_noisy(t, rho, 0.05);
    CHECK(res.statistic >= 0.0);
    CHECK(res.statistic <= at_plug + 1e-12);
  }
}

TEST_CASE("bit-flip ind statistic invariant to constant table shifts") {
  RngStream rng(608, 0);
  const double eps = 2.0;
  NoisyContingencyTable t = make_table(2, 2, {0, 0, 0, 0}, 6000);
  const Histogram h = sample_histogram(6000, ProbabilityVector::uniform(4), rng);
  for (int k = 0; k < 4; ++k) t.values[k] = static_cast<double>(h.counts[k]);
  const MarginalPair plug = estimate_marginals_bitflip(t, eps);
  const MarginalPair theta = make_marginals({0.5, 0.5}, {0.5, 0.5});
  const double q0 = stat_ind_bitflip(t, theta, plug, eps);
  for (double& v : t.values) v += 11.0;
  const double q1 = stat_ind_bitflip(t, theta, plug, eps);
  CHECK(q0 == doctest::Approx(q1).epsilon(1e-9));
}

TEST_CASE("contingency table validation") {
  CHECK_THROWS_AS(ContingencyTable::from_counts(1, 2, {1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContingencyTable::from_counts(2, 2, {1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContingencyTable::from_counts(2, 2, {1, -1, 2, 2}),
                  std::invalid_argument);
  const ContingencyTable ok = ContingencyTable::from_counts(2, 2, {1, 2, 3, 4});
  CHECK(ok.n == 10);
}

}  // namespace
}  // namespace ldpchisq
