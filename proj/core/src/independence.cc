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
#include <numeric>
#include <stdexcept>

#include "ldpchisq/chi_square.h"
#include "ldpchisq/error.h"
#include "ldpchisq/simplex_opt.h"
#include "ldpchisq/sym_matrix.h"

namespace ldpchisq {
namespace {

void check_shape(int rows, int cols) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument(
        "contingency table needs at least 2 rows and 2 columns");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

void check_epsilon(double epsilon, const char* what) {
  if (epsilon <= 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument(std::string(what) + ": epsilon must be > 0");
  }
}

std::vector<double> outer_flat(const ProbabilityVector& a,
                               const ProbabilityVector& b) {
  std::vector<double> out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      out[i * b.dim() + j] = a[i] * b[j];
    }
  }
  return out;
}

void check_marginal_shape(const MarginalPair& m, int rows, int cols,
                          const char* what) {
  if (static_cast<int>(m.pi1.dim()) != rows ||
      static_cast<int>(m.pi2.dim()) != cols) {
    throw std::invalid_argument(std::string(what) +
                                ": marginal dimensions do not match table");
  }
}

// True when some estimated expected cell count n * pi1_i * pi2_j is <= 5.
bool small_count_guard(std::int64_t n, const MarginalPair& est) {
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < est.pi1.dim(); ++i) {
    for (std::size_t j = 0; j < est.pi2.dim(); ++j) {
      if (nd * est.pi1[i] * est.pi2[j] <= 5.0) return true;
    }
  }
  return false;
}

IndTestResult make_ind_result(double statistic, int rows, int cols,
                              double alpha, MechanismKind method,
                              std::int64_t n, bool guard) {
  IndTestResult r;
  r.rows = rows;
  r.cols = cols;
  r.dof = (rows - 1) * (cols - 1);
  r.alpha = alpha;
  r.method = method;
  r.n = n;
  r.critical_value = chi2_quantile(r.dof, 1.0 - alpha);
  r.guard_triggered = guard;
  if (guard) {
    r.statistic = 0.0;
    r.p_value = std::nullopt;
    r.decision = Decision::kFailToReject;
    return r;
  }
  r.statistic = statistic;
  r.p_value = chi2_sf(r.dof, statistic);
  r.decision = statistic > r.critical_value ? Decision::kReject
                                            : Decision::kFailToReject;
  return r;
}

// Shared quadratic-form machinery for the two minimum chi-square tests: a
// fixed middle matrix and a theta-dependent model for the cell means.
struct QuadraticProblem {
  Eigen::MatrixXd middle;
  Eigen::VectorXd observed;
  double n = 0.0;

  template <typename ModelFn>
  double value(const MarginalPair& theta, const ModelFn& model) const {
    const std::vector<double> mean = model(theta);
    Eigen::VectorXd v(observed.size());
    for (Eigen::Index k = 0; k < observed.size(); ++k) {
      v(k) = observed(k) - n * mean[k];
    }
    return v.dot(middle * v) / n;
  }
};

Eigen::MatrixXd sandwich_inverse(const SymMatrix& m) {
  const int d = m.order();
  const Eigen::MatrixXd pi = centering_projector(d).mat();
  return pi * invert_spd(m).mat() * pi;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

SymMatrix noise_middle_matrix(const MarginalPair& plug, double rho) {
  const std::vector<double> p = outer_flat(plug.pi1, plug.pi2);
  const std::size_t d = p.size();
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(i, j) = (i == j ? p[i] + 1.0 / rho : 0.0) - p[i] * p[j];
    }
  }
  return SymMatrix(std::move(m));
}

NoisyContingencyTable counts_from_exp_records(
    std::span<const PairRecord> records, int rows, int cols, double epsilon,
    RngStream& rng) {
  NoisyContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.values.assign(static_cast<std::size_t>(rows * cols), 0.0);
  t.n = static_cast<std::int64_t>(records.size());
  const std::uint32_t d = t.flat_dim();
  for (const PairRecord& rec : records) {
    if (rec.row >= static_cast<std::uint32_t>(rows) ||
        rec.col >= static_cast<std::uint32_t>(cols)) {
      throw std::invalid_argument("ind test: record index out of range");
    }
    const OneHotRecord one(rec.row * cols + rec.col, d);
    t.values[randomize_exponential(one, epsilon, rng).index] += 1.0;
  }
  return t;
}

}  // namespace

ContingencyTable ContingencyTable::from_counts(
    int rows, int cols, std::vector<std::int64_t> counts) {
  ContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.counts = std::move(counts);
  t.n = std::accumulate(t.counts.begin(), t.counts.end(), std::int64_t{0});
  t.validate();
  return t;
}

void ContingencyTable::validate() const {
  check_shape(rows, cols);
  if (counts.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("ContingencyTable: size mismatch");
  }
  std::int64_t sum = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("ContingencyTable: negative count");
    sum += c;
  }
  if (sum != n) throw std::invalid_argument("ContingencyTable: bad total");
}

NoisyContingencyTable NoisyContingencyTable::from_table(
    const ContingencyTable& t) {
  t.validate();
  NoisyContingencyTable out;
  out.rows = t.rows;
  out.cols = t.cols;
  out.values.assign(t.counts.begin(), t.counts.end());
  out.n = t.n;
  return out;
}

void NoisyContingencyTable::validate() const {
  check_shape(rows, cols);
  if (values.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("NoisyContingencyTable: size mismatch");
  }
  if (n < 1) throw std::invalid_argument("NoisyContingencyTable: n must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("NoisyContingencyTable: non-finite value");
    }
  }
}

ProbabilityVector product_model(const MarginalPair& m) {
  return ProbabilityVector(outer_flat(m.pi1, m.pi2));
}

MarginalPair estimate_marginals_noise(const NoisyContingencyTable& t) {
  t.validate();
  const double nhat = std::accumulate(t.values.begin(), t.values.end(), 0.0);
  if (nhat <= 0.0) {
    throw DegenerateSampleError(
        "estimate_marginals_noise: noisy total is nonpositive");
  }
  std::vector<double> row(t.rows, 0.0);
  std::vector<double> col(t.cols, 0.0);
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      const double v = t.values[i * t.cols + j];
      row[i] += v;
      col[j] += v;
    }
  }
  for (double& v : row) v /= nhat;
  for (double& v : col) v /= nhat;
  return MarginalPair{clamp_to_interior(std::move(row)),
                      clamp_to_interior(std::move(col))};
}

double stat_ind_noise(const NoisyContingencyTable& t, const MarginalPair& theta,
                      const MarginalPair& plug, double rho) {
  t.validate();
  check_marginal_shape(theta, t.rows, t.cols, "stat_ind_noise");
  check_marginal_shape(plug, t.rows, t.cols, "stat_ind_noise");
  if (rho <= 0.0) throw std::invalid_argument("stat_ind_noise: rho must be > 0");
  plug.pi1.require_interior("stat_ind_noise plug");
  plug.pi2.require_interior("stat_ind_noise plug");
  QuadraticProblem prob{sandwich_inverse(noise_middle_matrix(plug, rho)),
                        to_eigen(t.values), static_cast<double>(t.n)};
  return prob.value(theta, [](const MarginalPair& th) {
    return outer_flat(th.pi1, th.pi2);
  });
}

ProbabilityVector pushed_table_exp(const MarginalPair& m, double epsilon) {
  check_epsilon(epsilon, "pushed_table_exp");
  const std::vector<double> p = outer_flat(m.pi1, m.pi2);
  const double rc = static_cast<double>(p.size());
  const double e = std::exp(epsilon);
  const double beta = 1.0 / (e + rc - 1.0);
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = beta * ((e - 1.0) * p[k] + 1.0);
  }
  return ProbabilityVector(std::move(out));
}

MarginalPair estimate_marginals_exp(const NoisyContingencyTable& counts,
                                    double epsilon) {
  counts.validate();
  check_epsilon(epsilon, "estimate_marginals_exp");
  const double e = std::exp(epsilon);
  const double rc = static_cast<double>(counts.size());
  const double beta = 1.0 / (e + rc - 1.0);
  const double scale = beta * (e - 1.0);
  const double n = static_cast<double>(counts.n);
  std::vector<double> row(counts.rows, 0.0);
  std::vector<double> col(counts.cols, 0.0);
  for (int i = 0; i < counts.rows; ++i) {
    for (int j = 0; j < counts.cols; ++j) {
      const double v = counts.values[i * counts.cols + j];
      row[i] += v;
      col[j] += v;
    }
  }
  for (int i = 0; i < counts.rows; ++i) {
    row[i] = (row[i] / n - static_cast<double>(counts.cols) * beta) / scale;
  }
  for (int j = 0; j < counts.cols; ++j) {
    col[j] = (col[j] / n - static_cast<double>(counts.rows) * beta) / scale;
  }
  return MarginalPair{clamp_to_interior(std::move(row)),
                      clamp_to_interior(std::move(col))};
}

double ind_exp_statistic(const NoisyContingencyTable& counts,
                         const MarginalPair& plug, double epsilon) {
  counts.validate();
  check_marginal_shape(plug, counts.rows, counts.cols, "ind_exp_statistic");
  const ProbabilityVector pushed = pushed_table_exp(plug, epsilon);
  const double n = static_cast<double>(counts.n);
  double q = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = n * pushed[k];
    const double diff = counts.values[k] - expected;
    q += diff * diff / expected;
  }
  return q;
}

double ind_exp_quadratic(const NoisyContingencyTable& counts,
                         const MarginalPair& theta, const MarginalPair& plug,
                         double epsilon) {
  counts.validate();
  check_marginal_shape(theta, counts.rows, counts.cols, "ind_exp_quadratic");
  check_marginal_shape(plug, counts.rows, counts.cols, "ind_exp_quadratic");
  plug.pi1.require_interior("ind_exp_quadratic plug");
  plug.pi2.require_interior("ind_exp_quadratic plug");
  const std::vector<double> weight_base = outer_flat(plug.pi1, plug.pi2);
  const ProbabilityVector pushed = pushed_table_exp(theta, epsilon);
  const double n = static_cast<double>(counts.n);
  double q = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double diff = counts.values[k] / n - pushed[k];
    q += diff * diff / weight_base[k];
  }
  return n * q;
}

std::vector<double> pushed_table_bitflip(const MarginalPair& m,
                                         double epsilon) {
  check_epsilon(epsilon, "pushed_table_bitflip");
  const std::vector<double> p = outer_flat(m.pi1, m.pi2);
  const double eh = std::exp(0.5 * epsilon);
  const double alpha = bitflip_alpha(epsilon);
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = alpha * p[k] + 1.0 / (eh + 1.0);
  }
  return out;
}

MarginalPair estimate_marginals_bitflip(const NoisyContingencyTable& t,
                                        double epsilon) {
  t.validate();
  check_epsilon(epsilon, "estimate_marginals_bitflip");
  const double eh = std::exp(0.5 * epsilon);
  const double alpha = bitflip_alpha(epsilon);
  const double n = static_cast<double>(t.n);
  std::vector<double> row(t.rows, 0.0);
  std::vector<double> col(t.cols, 0.0);
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      const double v = t.values[i * t.cols + j];
      row[i] += v;
      col[j] += v;
    }
  }
  for (int i = 0; i < t.rows; ++i) {
    row[i] =
        (row[i] / n - static_cast<double>(t.cols) / (eh + 1.0)) / alpha;
  }
  for (int j = 0; j < t.cols; ++j) {
    col[j] =
        (col[j] / n - static_cast<double>(t.rows) / (eh + 1.0)) / alpha;
  }
  return MarginalPair{clamp_to_interior(std::move(row)),
                      clamp_to_interior(std::move(col))};
}

double stat_ind_bitflip(const NoisyContingencyTable& t,
                        const MarginalPair& theta, const MarginalPair& plug,
                        double epsilon) {
  t.validate();
  check_marginal_shape(theta, t.rows, t.cols, "stat_ind_bitflip");
  check_marginal_shape(plug, t.rows, t.cols, "stat_ind_bitflip");
  check_epsilon(epsilon, "stat_ind_bitflip");
  QuadraticProblem prob{
      sandwich_inverse(bitflip_covariance(product_model(plug), epsilon)),
      to_eigen(t.values), static_cast<double>(t.n)};
  return prob.value(theta, [epsilon](const MarginalPair& th) {
    return pushed_table_bitflip(th, epsilon);
  });
}

IndTestResult ind_noise_test_from_noisy(const NoisyContingencyTable& t,
                                        double rho, double alpha) {
  t.validate();
  check_alpha(alpha);
  if (rho <= 0.0) throw std::invalid_argument("ind_noise_test: rho must be > 0");
  const MechanismKind kind = MechanismKind::gaussian_noise(rho);
  const MarginalPair plug = estimate_marginals_noise(t);
  if (small_count_guard(t.n, plug)) {
    return make_ind_result(0.0, t.rows, t.cols, alpha, kind, t.n, true);
  }
  QuadraticProblem prob{sandwich_inverse(noise_middle_matrix(plug, rho)),
                        to_eigen(t.values), static_cast<double>(t.n)};
  const auto objective = [&prob](const MarginalPair& theta) {
    return prob.value(theta, [](const MarginalPair& th) {
      return outer_flat(th.pi1, th.pi2);
    });
  };
  const SimplexMinResult min = minimize_product_simplex(objective, plug);
  return make_ind_result(min.value, t.rows, t.cols, alpha, kind, t.n, false);
}

IndTestResult ind_noise_test(std::span<const PairRecord> records, int rows,
                             int cols, double rho, double alpha,
                             RngStream& rng) {
  check_shape(rows, cols);
  if (records.empty()) throw std::invalid_argument("ind_noise_test: no records");
  if (rho <= 0.0) throw std::invalid_argument("ind_noise_test: rho must be > 0");
  const MechanismKind kind = MechanismKind::gaussian_noise(rho);
  NoisyContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.values.assign(static_cast<std::size_t>(rows * cols), 0.0);
  t.n = static_cast<std::int64_t>(records.size());
  const std::uint32_t d = t.flat_dim();
  for (const PairRecord& rec : records) {
    if (rec.row >= static_cast<std::uint32_t>(rows) ||
        rec.col >= static_cast<std::uint32_t>(cols)) {
      throw std::invalid_argument("ind_noise_test: record index out of range");
    }
    const OneHotRecord one(rec.row * cols + rec.col, d);
    const PrivateReport rep = randomize_noise(one, kind, rng);
    const auto& v = std::get<std::vector<double>>(rep.payload);
    for (std::size_t k = 0; k < v.size(); ++k) t.values[k] += v[k];
  }
  return ind_noise_test_from_noisy(t, rho, alpha);
}

IndTestResult ind_exp_test_from_counts(const NoisyContingencyTable& counts,
                                       double epsilon, double alpha) {
  counts.validate();
  check_alpha(alpha);
  check_epsilon(epsilon, "ind_exp_test");
  const MechanismKind kind = MechanismKind::exponential(epsilon);
  const MarginalPair plug = estimate_marginals_exp(counts, epsilon);
  if (small_count_guard(counts.n, plug)) {
    return make_ind_result(0.0, counts.rows, counts.cols, alpha, kind,
                           counts.n, true);
  }
  const double q = ind_exp_statistic(counts, plug, epsilon);
  return make_ind_result(q, counts.rows, counts.cols, alpha, kind, counts.n,
                         false);
}

IndTestResult ind_exp_test(std::span<const PairRecord> records, int rows,
                           int cols, double epsilon, double alpha,
                           RngStream& rng) {
  check_shape(rows, cols);
  if (records.empty()) throw std::invalid_argument("ind_exp_test: no records");
  check_epsilon(epsilon, "ind_exp_test");
  const NoisyContingencyTable counts =
      counts_from_exp_records(records, rows, cols, epsilon, rng);
  return ind_exp_test_from_counts(counts, epsilon, alpha);
}

IndTestResult ind_bitflip_test_from_counts(const NoisyContingencyTable& t,
                                           double epsilon, double alpha) {
  t.validate();
  check_alpha(alpha);
  check_epsilon(epsilon, "ind_bitflip_test");
  const MechanismKind kind = MechanismKind::bit_flip(epsilon);
  const MarginalPair plug = estimate_marginals_bitflip(t, epsilon);
  if (small_count_guard(t.n, plug)) {
    return make_ind_result(0.0, t.rows, t.cols, alpha, kind, t.n, true);
  }
  QuadraticProblem prob{
      sandwich_inverse(bitflip_covariance(product_model(plug), epsilon)),
      to_eigen(t.values), static_cast<double>(t.n)};
  const auto objective = [&prob, epsilon](const MarginalPair& theta) {
    return prob.value(theta, [epsilon](const MarginalPair& th) {
      return pushed_table_bitflip(th, epsilon);
    });
  };
  const SimplexMinResult min = minimize_product_simplex(objective, plug);
  return make_ind_result(min.value, t.rows, t.cols, alpha, kind, t.n, false);
}

IndTestResult ind_bitflip_test(std::span<const PairRecord> records, int rows,
                               int cols, double epsilon, double alpha,
                               RngStream& rng) {
  check_shape(rows, cols);
  if (records.empty()) {
    throw std::invalid_argument("ind_bitflip_test: no records");
  }
  check_epsilon(epsilon, "ind_bitflip_test");
  NoisyContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.values.assign(static_cast<std::size_t>(rows * cols), 0.0);
  t.n = static_cast<std::int64_t>(records.size());
  const std::uint32_t d = t.flat_dim();
  for (const PairRecord& rec : records) {
    if (rec.row >= static_cast<std::uint32_t>(rows) ||
        rec.col >= static_cast<std::uint32_t>(cols)) {
      throw std::invalid_argument("ind_bitflip_test: record index out of range");
    }
    const OneHotRecord one(rec.row * cols + rec.col, d);
    const PrivateReport rep = randomize_bitflip(one, epsilon, rng);
    const auto& bits = std::get<std::vector<bool>>(rep.payload);
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (bits[k]) t.values[k] += 1.0;
    }
  }
  return ind_bitflip_test_from_counts(t, epsilon, alpha);
}

}  // namespace ldpchisq
