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

#include "ldpchisq/simulation.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ldpchisq/chi_square.h"
#include "ldpchisq/error.h"
#include "ldpchisq/gof.h"
#include "ldpchisq/independence.h"
#include "ldpchisq/kv_config.h"
#include "ldpchisq/sampling.h"

namespace ldpchisq {
namespace {

constexpr std::uint64_t kTrialStreamRoot = 7001;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> alternating_pattern(int len) {
  std::vector<double> p(len);
  for (int i = 0; i < len; ++i) p[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return p;
}

ProbabilityVector gof_data_distribution(int d, double eta) {
  std::vector<double> p(d, 1.0 / static_cast<double>(d));
  if (eta != 0.0) {
    const std::vector<double> pattern = alternating_pattern(d);
    for (int j = 0; j < d; ++j) p[j] += eta * pattern[j];
  }
  return ProbabilityVector(std::move(p));
}

ProbabilityVector ind_data_distribution(int rows, int cols, double eta) {
  std::vector<double> cells(static_cast<std::size_t>(rows) * cols,
                            1.0 / static_cast<double>(rows * cols));
  if (eta != 0.0) {
    const std::vector<double> pr = alternating_pattern(rows);
    const std::vector<double> pc = alternating_pattern(cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        cells[i * cols + j] += eta * pr[i] * pc[j];
      }
    }
  }
  return ProbabilityVector(std::move(cells));
}

double predicted_gof_power(MechanismFamily family, int d, double epsilon,
                           std::int64_t n, double eta, double alpha) {
  MechanismKind kind = MechanismKind::exponential(1.0);
  switch (family) {
    case MechanismFamily::kGaussianNoise:
      kind = MechanismKind::gaussian_noise(epsilon * epsilon / 8.0);
      break;
    case MechanismFamily::kExponential:
      kind = MechanismKind::exponential(epsilon);
      break;
    case MechanismFamily::kBitFlip:
      kind = MechanismKind::bit_flip(epsilon);
      break;
    case MechanismFamily::kLaplaceNoise:
      throw std::invalid_argument("no power prediction for the Laplace branch");
  }
  const std::vector<double> pattern = alternating_pattern(d);
  std::vector<double> delta(d);
  const double scale = eta * std::sqrt(static_cast<double>(n));
  for (int j = 0; j < d; ++j) delta[j] = scale * pattern[j];
  const GofNull null = GofNull::uniform(d);
  const double lambda = noncentral_lambda(kind, null, delta);
  const double crit = chi2_quantile(d - 1, 1.0 - alpha);
  return noncentral_chi2_sf(d - 1, lambda, crit);
}

struct Cell {
  MechanismFamily mechanism;
  std::size_t mech_index = 0;
  double epsilon = 0.0;
  std::size_t eps_index = 0;
  std::int64_t n = 0;
  std::size_t n_index = 0;
};

std::vector<Cell> make_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (std::size_t im = 0; im < config.mechanisms.size(); ++im) {
    for (std::size_t ie = 0; ie < config.epsilons.size(); ++ie) {
      for (std::size_t in = 0; in < config.n_grid.size(); ++in) {
        cells.push_back(Cell{config.mechanisms[im], im, config.epsilons[ie],
                             ie, config.n_grid[in], in});
      }
    }
  }
  return cells;
}

bool run_gof_trial(const ExperimentConfig& config, const Cell& cell,
                   const ProbabilityVector& p_data, const GofNull& null,
                   RngStream trial_stream) {
  RngStream data_rng = trial_stream.substream(0);
  switch (cell.mechanism) {
    case MechanismFamily::kGaussianNoise: {
      const MechanismKind kind =
          MechanismKind::gaussian_noise(cell.epsilon * cell.epsilon / 8.0);
      const NoisyHistogram nh =
          sample_noise_aggregate(cell.n, p_data, kind, data_rng);
      return gof_noise_from_noisy(nh, null, kind, config.alpha).decision ==
             Decision::kReject;
    }
    case MechanismFamily::kLaplaceNoise: {
      const MechanismKind kind = MechanismKind::laplace_noise(cell.epsilon);
      const NoisyHistogram nh =
          sample_noise_aggregate(cell.n, p_data, kind, data_rng);
      McConfig mc{config.mc_samples, trial_stream.substream(1)};
      return gof_noise_from_noisy(nh, null, kind, config.alpha, mc).decision ==
             Decision::kReject;
    }
    case MechanismFamily::kExponential: {
      const NoisyHistogram nh =
          sample_exponential_aggregate(cell.n, p_data, cell.epsilon, data_rng);
      return gof_exponential_from_counts(nh, null, cell.epsilon, config.alpha)
                 .decision == Decision::kReject;
    }
    case MechanismFamily::kBitFlip: {
      const NoisyHistogram nh =
          sample_bitflip_aggregate(cell.n, p_data, cell.epsilon, data_rng);
      return gof_bitflip_from_counts(nh, null, cell.epsilon, config.alpha)
                 .decision == Decision::kReject;
    }
  }
  throw std::invalid_argument("run_gof_trial: unknown mechanism");
}

bool run_ind_trial(const ExperimentConfig& config, const Cell& cell,
                   const ProbabilityVector& cells_dist,
                   RngStream trial_stream) {
  RngStream data_rng = trial_stream.substream(0);
  NoisyContingencyTable t;
  t.rows = config.rows;
  t.cols = config.cols;
  t.n = cell.n;
  switch (cell.mechanism) {
    case MechanismFamily::kGaussianNoise: {
      const double rho = cell.epsilon * cell.epsilon / 8.0;
      const MechanismKind kind = MechanismKind::gaussian_noise(rho);
      t.values =
          sample_noise_aggregate(cell.n, cells_dist, kind, data_rng).values;
      return ind_noise_test_from_noisy(t, rho, config.alpha).decision ==
             Decision::kReject;
    }
    case MechanismFamily::kExponential: {
      t.values =
          sample_exponential_aggregate(cell.n, cells_dist, cell.epsilon,
                                       data_rng)
              .values;
      return ind_exp_test_from_counts(t, cell.epsilon, config.alpha)
                 .decision == Decision::kReject;
    }
    case MechanismFamily::kBitFlip: {
      t.values = sample_bitflip_aggregate(cell.n, cells_dist, cell.epsilon,
                                          data_rng)
                     .values;
      return ind_bitflip_test_from_counts(t, cell.epsilon, config.alpha)
                 .decision == Decision::kReject;
    }
    case MechanismFamily::kLaplaceNoise:
      break;
  }
  throw std::invalid_argument("run_ind_trial: Laplace not supported for IND");
}

PowerCurve run_experiment(const ExperimentConfig& config, int workers,
                          double eta) {
  config.validate();
  const std::vector<Cell> cells = make_cells(config);
  const int trials = config.trials;
  const std::int64_t total =
      static_cast<std::int64_t>(cells.size()) * trials;
  std::vector<std::uint8_t> rejected(total, 0);

  const bool is_gof = config.test == TestKind::kGof;
  const GofNull null = is_gof ? GofNull::uniform(config.d) : GofNull::uniform(2);
  const ProbabilityVector data_dist =
      is_gof ? gof_data_distribution(config.d, eta)
             : ind_data_distribution(config.rows, config.cols, eta);

  const RngStream root(config.master_seed, kTrialStreamRoot);
  parallel_for(total, workers, [&](std::int64_t idx) {
    const Cell& cell = cells[static_cast<std::size_t>(idx / trials)];
    const int trial = static_cast<int>(idx % trials);
    const RngStream trial_stream = root.substream(cell.mech_index)
                                       .substream(cell.eps_index)
                                       .substream(cell.n_index)
                                       .substream(static_cast<std::uint64_t>(trial));
    const bool reject =
        is_gof ? run_gof_trial(config, cell, data_dist, null, trial_stream)
               : run_ind_trial(config, cell, data_dist, trial_stream);
    rejected[idx] = reject ? 1 : 0;
  });

  PowerCurve curve;
  curve.rows.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    int count = 0;
    for (int t = 0; t < trials; ++t) {
      count += rejected[static_cast<std::int64_t>(c) * trials + t];
    }
    PowerCurveRow row;
    row.test = config.test;
    row.mechanism = cell.mechanism;
    row.epsilon = cell.epsilon;
    row.d = is_gof ? config.d : 0;
    row.rows = is_gof ? 0 : config.rows;
    row.cols = is_gof ? 0 : config.cols;
    row.n = cell.n;
    row.eta = eta;
    row.alpha = config.alpha;
    row.trials = trials;
    row.rejections = count;
    row.power = static_cast<double>(count) / trials;
    row.std_error = std::sqrt(row.power * (1.0 - row.power) / trials);
    if (is_gof && cell.mechanism != MechanismFamily::kLaplaceNoise) {
      row.predicted_power = predicted_gof_power(
          cell.mechanism, config.d, cell.epsilon, cell.n, eta, config.alpha);
      row.has_predicted = true;
    }
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie strictly inside (0, 1)");
  }
  if (mechanisms.empty()) throw ConfigError("mechanisms must be nonempty");
  if (epsilons.empty()) throw ConfigError("epsilons must be nonempty");
  for (double e : epsilons) {
    if (e <= 0.0) throw ConfigError("epsilons must be strictly positive");
  }
  if (n_grid.empty()) throw ConfigError("ns must be nonempty");
  for (std::int64_t n : n_grid) {
    if (n < 1) throw ConfigError("ns must be >= 1");
  }
  if (eta < 0.0) throw ConfigError("eta must be >= 0");
  if (test == TestKind::kGof) {
    if (d < 2) throw ConfigError("gof requires d >= 2");
    if (rows != 0 || cols != 0) {
      throw ConfigError("gof config must not set r or c");
    }
    if (eta != 0.0) {
      if (d % 2 != 0) throw ConfigError("eta pattern requires even d");
      if (eta >= 1.0 / static_cast<double>(d)) {
        throw ConfigError("eta too large: alternate leaves the simplex");
      }
    }
  } else {
    if (rows < 2 || cols < 2) throw ConfigError("ind requires r >= 2, c >= 2");
    if (d != 0) throw ConfigError("ind config must not set d");
    for (MechanismFamily m : mechanisms) {
      if (m == MechanismFamily::kLaplaceNoise) {
        throw ConfigError(
            "the Laplace noise mechanism is not provided for independence "
            "tests");
      }
    }
    if (eta != 0.0) {
      if (rows % 2 != 0 || cols % 2 != 0) {
        throw ConfigError("eta pattern requires even r and c");
      }
      if (eta >= 1.0 / static_cast<double>(rows * cols)) {
        throw ConfigError("eta too large: alternate cell goes nonpositive");
      }
    }
  }
  for (MechanismFamily m : mechanisms) {
    if (m == MechanismFamily::kLaplaceNoise) {
      const int min_m = static_cast<int>(std::ceil(1.0 / alpha - 1e-9));
      if (mc_samples <= min_m) {
        throw ConfigError("mc_samples must exceed ceil(1/alpha)");
      }
    }
  }
}

PowerCurve run_type1(const ExperimentConfig& config, int workers) {
  return run_experiment(config, workers, 0.0);
}

PowerCurve run_power_gof(const ExperimentConfig& config, int workers) {
  if (config.test != TestKind::kGof) {
    throw ConfigError("run_power_gof requires a gof config");
  }
  return run_experiment(config, workers, config.eta);
}

PowerCurve run_power_ind(const ExperimentConfig& config, int workers) {
  if (config.test != TestKind::kInd) {
    throw ConfigError("run_power_ind requires an ind config");
  }
  return run_experiment(config, workers, config.eta);
}

std::string PowerCurve::to_csv() const {
  std::ostringstream out;
  out << "# format_version=1\n";
  out << "test,mechanism,epsilon,d,r,c,n,eta,alpha,trials,rejections,power,"
         "stderr,predicted_power\n";
  for (const PowerCurveRow& row : rows) {
    out << (row.test == TestKind::kGof ? "gof" : "ind") << ','
        << mechanism_name(row.mechanism) << ',' << fmt6(row.epsilon) << ',';
    if (row.d > 0) out << row.d;
    out << ',';
    if (row.rows > 0) out << row.rows;
    out << ',';
    if (row.cols > 0) out << row.cols;
    out << ',' << row.n << ',' << fmt6(row.eta) << ',' << fmt6(row.alpha)
        << ',' << row.trials << ',' << row.rejections << ','
        << fmt6(row.power) << ',' << fmt6(row.std_error) << ',';
    if (row.has_predicted) out << fmt6(row.predicted_power);
    out << '\n';
  }
  return out.str();
}

std::vector<CoefficientRow> noncentral_coefficient_table(
    std::span<const int> ds, std::span<const double> epsilons) {
  static constexpr MechanismFamily kFamilies[] = {
      MechanismFamily::kExponential, MechanismFamily::kBitFlip,
      MechanismFamily::kGaussianNoise};
  std::vector<CoefficientRow> rows;
  for (int d : ds) {
    for (double eps : epsilons) {
      for (MechanismFamily family : kFamilies) {
        rows.push_back(CoefficientRow{
            d, eps, family, uniform_null_coefficient(family, d, eps)});
      }
    }
  }
  return rows;
}

std::string coefficient_table_to_csv(std::span<const CoefficientRow> rows) {
  std::ostringstream out;
  out << "# format_version=1\n";
  out << "d,epsilon,mechanism,coefficient\n";
  for (const CoefficientRow& row : rows) {
    out << row.d << ',' << fmt6(row.epsilon) << ','
        << mechanism_name(row.mechanism) << ',' << fmt6(row.coefficient)
        << '\n';
  }
  return out.str();
}

NoisyHistogram sample_noise_aggregate(std::int64_t n,
                                      const ProbabilityVector& p,
                                      MechanismKind kind, RngStream& rng) {
  const Histogram h = sample_histogram(n, p, rng);
  NoisyHistogram nh = NoisyHistogram::from_histogram(h);
  if (kind.family == MechanismFamily::kGaussianNoise) {
    const double stddev = std::sqrt(static_cast<double>(n) / kind.rho());
    for (double& v : nh.values) v += rng.normal(0.0, stddev);
  } else if (kind.family == MechanismFamily::kLaplaceNoise) {
    const double scale = 2.0 / kind.epsilon();
    for (double& v : nh.values) v += sample_laplace_sum(n, scale, rng);
  } else {
    throw std::invalid_argument(
        "sample_noise_aggregate: kind must be Gaussian or Laplace");
  }
  return nh;
}

NoisyHistogram sample_exponential_aggregate(std::int64_t n,
                                            const ProbabilityVector& p,
                                            double epsilon, RngStream& rng) {
  const ProbabilityVector pushed = pushed_exp_distribution(p, epsilon);
  return NoisyHistogram::from_histogram(sample_histogram(n, pushed, rng));
}

NoisyHistogram sample_bitflip_aggregate(std::int64_t n,
                                        const ProbabilityVector& p,
                                        double epsilon, RngStream& rng) {
  const Histogram h = sample_histogram(n, p, rng);
  const double eh = std::exp(0.5 * epsilon);
  const double keep = eh / (eh + 1.0);
  NoisyHistogram nh;
  nh.values.resize(p.dim());
  nh.n = n;
  // Conditional on the category counts, the flipped bits are independent
  // across coordinates: kept ones plus flipped zeros.
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const std::int64_t ones = h.counts[j];
    nh.values[j] = static_cast<double>(rng.binomial(ones, keep) +
                                       rng.binomial(n - ones, 1.0 - keep));
  }
  return nh;
}

void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  if (workers < 1) workers = 1;
  if (workers == 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int thread_count =
      static_cast<int>(std::min<std::int64_t>(workers, count));
  std::atomic<std::int64_t> next(0);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string mechanism_name(MechanismFamily family) {
  switch (family) {
    case MechanismFamily::kGaussianNoise:
      return "gaussian";
    case MechanismFamily::kLaplaceNoise:
      return "laplace";
    case MechanismFamily::kExponential:
      return "exponential";
    case MechanismFamily::kBitFlip:
      return "bitflip";
  }
  return "unknown";
}

MechanismFamily mechanism_from_name(const std::string& name) {
  if (name == "gaussian") return MechanismFamily::kGaussianNoise;
  if (name == "laplace") return MechanismFamily::kLaplaceNoise;
  if (name == "exponential") return MechanismFamily::kExponential;
  if (name == "bitflip") return MechanismFamily::kBitFlip;
  throw ConfigError("unknown mechanism: " + name);
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  static const std::set<std::string> kKeys = {
      "format_version", "test", "mechanisms", "d",      "r",
      "c",              "epsilons", "alpha",  "ns",     "eta",
      "trials",         "seed",     "mc_samples", "output"};
  const auto kv = parse_kv(in, kKeys);
  const std::string version = kv_string(kv, "format_version", "1");
  if (version != "1") {
    throw ConfigError("unsupported format_version: " + version);
  }
  ExperimentConfig config;
  const std::string test = kv_string(kv, "test", "");
  if (test == "gof") {
    config.test = TestKind::kGof;
  } else if (test == "ind") {
    config.test = TestKind::kInd;
  } else {
    throw ConfigError("config key test must be gof or ind");
  }
  for (const std::string& m : kv_list(kv, "mechanisms")) {
    config.mechanisms.push_back(mechanism_from_name(m));
  }
  config.d = static_cast<int>(kv_int(kv, "d", 0));
  config.rows = static_cast<int>(kv_int(kv, "r", 0));
  config.cols = static_cast<int>(kv_int(kv, "c", 0));
  config.epsilons = kv_double_list(kv, "epsilons");
  config.alpha = kv_double(kv, "alpha", 0.05);
  config.n_grid = kv_int_list(kv, "ns");
  config.eta = kv_double(kv, "eta", 0.0);
  config.trials = static_cast<int>(kv_int(kv, "trials", 1000));
  config.master_seed = kv_uint64(kv, "seed", 0);
  config.mc_samples = static_cast<int>(kv_int(kv, "mc_samples", 999));
  config.output_path = kv_string(kv, "output", "");
  config.validate();
  return config;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in);
}

std::string experiment_config_echo(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "format_version=1\n";
  out << "test=" << (config.test == TestKind::kGof ? "gof" : "ind") << "\n";
  out << "mechanisms=";
  for (std::size_t i = 0; i < config.mechanisms.size(); ++i) {
    if (i) out << ',';
    out << mechanism_name(config.mechanisms[i]);
  }
  out << "\n";
  if (config.test == TestKind::kGof) {
    out << "d=" << config.d << "\n";
  } else {
    out << "r=" << config.rows << "\n";
    out << "c=" << config.cols << "\n";
  }
  out << "epsilons=";
  for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
    if (i) out << ',';
    out << fmt6(config.epsilons[i]);
  }
  out << "\n";
  out << "alpha=" << fmt6(config.alpha) << "\n";
  out << "ns=";
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (i) out << ',';
    out << config.n_grid[i];
  }
  out << "\n";
  out << "eta=" << fmt6(config.eta) << "\n";
  out << "trials=" << config.trials << "\n";
  out << "seed=" << config.master_seed << "\n";
  out << "mc_samples=" << config.mc_samples << "\n";
  out << "output=" << config.output_path << "\n";
  return out.str();
}

}  // namespace ldpchisq
