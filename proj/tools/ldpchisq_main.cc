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
//
// Command line front end: privatize record files, run locally private
// goodness-of-fit and independence tests, and drive the simulation harness.
//
// Exit codes: 0 fail-to-reject (or plain success), 3 reject, 1 usage error,
// 2 data/validation/config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ldpchisq/error.h"
#include "ldpchisq/gof.h"
#include "ldpchisq/independence.h"
#include "ldpchisq/kv_config.h"
#include "ldpchisq/record_io.h"
#include "ldpchisq/report.h"
#include "ldpchisq/simulation.h"

namespace {

constexpr int kExitFailToReject = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitReject = 3;

using ldpchisq::ConfigError;
using ldpchisq::Decision;
using ldpchisq::MechanismFamily;
using ldpchisq::MechanismKind;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kAlphaValidator(
    [](std::string& value) -> std::string {
      try {
        const double a = std::stod(value);
        if (a > 0.0 && a < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "alpha must lie strictly inside (0, 1)";
    },
    "ALPHA", "alpha");

// Seed precedence: --seed flag, then LDP_CHISQ_SEED, then OS entropy.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) return *flag;
  if (const char* env = std::getenv("LDP_CHISQ_SEED")) {
    try {
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("LDP_CHISQ_SEED is not an unsigned integer");
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return in;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << contents;
}

MechanismKind resolve_kind(const std::string& mechanism,
                           const std::optional<double>& epsilon,
                           const std::optional<double>& rho) {
  const MechanismFamily family = ldpchisq::mechanism_from_name(mechanism);
  if (family == MechanismFamily::kGaussianNoise) {
    if (!rho.has_value()) {
      throw UsageError("mechanism gaussian requires --rho");
    }
    return MechanismKind::gaussian_noise(*rho);
  }
  if (!epsilon.has_value()) {
    throw UsageError("mechanism " + mechanism + " requires --epsilon");
  }
  switch (family) {
    case MechanismFamily::kLaplaceNoise:
      return MechanismKind::laplace_noise(*epsilon);
    case MechanismFamily::kExponential:
      return MechanismKind::exponential(*epsilon);
    case MechanismFamily::kBitFlip:
      return MechanismKind::bit_flip(*epsilon);
    default:
      break;
  }
  throw UsageError("unknown mechanism: " + mechanism);
}

void emit_report(const std::string& json, const std::string& output_path) {
  std::cout << json << "\n";
  if (!output_path.empty()) write_file(output_path, json + "\n");
}

struct PrivatizeArgs {
  std::string input, output, mechanism;
  std::optional<double> epsilon, rho;
  int d = 0, rows = 0, cols = 0;
  std::optional<std::uint64_t> seed;
};

int run_privatize(const PrivatizeArgs& args) {
  const MechanismKind kind = resolve_kind(args.mechanism, args.epsilon,
                                          args.rho);
  if ((args.d > 0) == (args.rows > 0 || args.cols > 0)) {
    throw UsageError("pass exactly one of --d or the pair --r and --c");
  }
  std::vector<ldpchisq::OneHotRecord> records;
  if (args.d > 0) {
    auto in = open_input(args.input);
    records = ldpchisq::read_category_records(in, args.d);
  } else {
    if (args.rows < 2 || args.cols < 2) {
      throw UsageError("--r and --c must both be at least 2");
    }
    auto in = open_input(args.input);
    // Pair records flatten row-major onto r*c one-hot categories.
    for (const ldpchisq::PairRecord& p :
         ldpchisq::read_pair_records(in, args.rows, args.cols)) {
      records.emplace_back(p.row * args.cols + p.col,
                           static_cast<std::uint32_t>(args.rows * args.cols));
    }
  }
  const std::uint64_t seed = resolve_seed(args.seed);
  ldpchisq::RngStream rng(seed, 0);
  std::vector<ldpchisq::PrivateReport> reports;
  reports.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ldpchisq::RngStream record_rng = rng.substream(i);
    switch (kind.family) {
      case MechanismFamily::kGaussianNoise:
      case MechanismFamily::kLaplaceNoise:
        reports.push_back(
            ldpchisq::randomize_noise(records[i], kind, record_rng));
        break;
      case MechanismFamily::kExponential:
        reports.push_back(ldpchisq::PrivateReport{
            kind,
            ldpchisq::randomize_exponential(records[i], kind.epsilon(),
                                            record_rng)});
        break;
      case MechanismFamily::kBitFlip:
        reports.push_back(
            ldpchisq::randomize_bitflip(records[i], kind.epsilon(),
                                        record_rng));
        break;
    }
  }
  std::string csv = ldpchisq::private_reports_to_csv(reports);
  csv += "# seed=" + std::to_string(seed) + "\n";
  write_file(args.output, csv);
  return 0;
}

struct GofArgs {
  std::string input, null_file, output, mechanism;
  std::optional<double> epsilon, rho;
  int uniform_d = 0;
  double alpha = 0.05;
  std::optional<int> mc_samples;
  std::optional<std::uint64_t> seed;
};

int run_gof(const GofArgs& args) {
  const MechanismKind kind = resolve_kind(args.mechanism, args.epsilon,
                                          args.rho);
  if ((args.uniform_d > 0) == !args.null_file.empty()) {
    throw UsageError("pass exactly one of --uniform or --null");
  }
  std::optional<ldpchisq::GofNull> null;
  if (args.uniform_d > 0) {
    if (args.uniform_d < 2) throw UsageError("--uniform needs d >= 2");
    null.emplace(ldpchisq::GofNull::uniform(args.uniform_d));
  } else {
    auto in = open_input(args.null_file);
    null.emplace(ldpchisq::read_probability_file(in));
  }
  std::optional<ldpchisq::McConfig> mc;
  const std::uint64_t seed = resolve_seed(args.seed);
  if (kind.family == MechanismFamily::kLaplaceNoise) {
    if (!args.mc_samples.has_value()) {
      throw UsageError("mechanism laplace requires --mc-samples");
    }
    try {
      (void)ldpchisq::mc_tau_rank(*args.mc_samples, args.alpha);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    mc = ldpchisq::McConfig{*args.mc_samples, ldpchisq::RngStream(seed, 1)};
  } else if (args.mc_samples.has_value()) {
    throw UsageError("--mc-samples only applies to mechanism laplace");
  }

  auto in = open_input(args.input);
  const auto records =
      ldpchisq::read_category_records(in, null->dim());
  ldpchisq::RngStream rng(seed, 0);

  ldpchisq::TestResult result;
  switch (kind.family) {
    case MechanismFamily::kGaussianNoise:
    case MechanismFamily::kLaplaceNoise:
      result = ldpchisq::gof_noise(records, *null, kind, args.alpha, rng, mc);
      break;
    case MechanismFamily::kExponential:
      result = ldpchisq::gof_exponential(records, *null, kind.epsilon(),
                                         args.alpha, rng);
      break;
    case MechanismFamily::kBitFlip:
      result = ldpchisq::gof_bitflip(records, *null, kind.epsilon(),
                                     args.alpha, rng);
      break;
  }
  emit_report(ldpchisq::report_json(result, seed), args.output);
  return result.decision == Decision::kReject ? kExitReject
                                              : kExitFailToReject;
}

struct IndArgs {
  std::string input, output, mechanism;
  std::optional<double> epsilon, rho;
  int rows = 0, cols = 0;
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
};

int run_ind(const IndArgs& args) {
  const MechanismKind kind = resolve_kind(args.mechanism, args.epsilon,
                                          args.rho);
  if (kind.family == MechanismFamily::kLaplaceNoise) {
    throw UsageError(
        "the Laplace noise mechanism is not provided for independence tests");
  }
  auto in = open_input(args.input);
  const auto records = ldpchisq::read_pair_records(in, args.rows, args.cols);
  const std::uint64_t seed = resolve_seed(args.seed);
  ldpchisq::RngStream rng(seed, 0);
  ldpchisq::IndTestResult result;
  switch (kind.family) {
    case MechanismFamily::kGaussianNoise:
      result = ldpchisq::ind_noise_test(records, args.rows, args.cols,
                                        kind.rho(), args.alpha, rng);
      break;
    case MechanismFamily::kExponential:
      result = ldpchisq::ind_exp_test(records, args.rows, args.cols,
                                      kind.epsilon(), args.alpha, rng);
      break;
    case MechanismFamily::kBitFlip:
      result = ldpchisq::ind_bitflip_test(records, args.rows, args.cols,
                                          kind.epsilon(), args.alpha, rng);
      break;
    default:
      break;
  }
  emit_report(ldpchisq::report_json(result, seed), args.output);
  return result.decision == Decision::kReject ? kExitReject
                                              : kExitFailToReject;
}

void write_curve(const ldpchisq::ExperimentConfig& config,
                 const ldpchisq::PowerCurve& curve) {
  if (config.output_path.empty()) {
    throw ConfigError("experiment config needs an output= path");
  }
  write_file(config.output_path, curve.to_csv());
  write_file(config.output_path + ".meta",
             ldpchisq::experiment_config_echo(config));
}

int run_power(const std::string& config_path, int workers) {
  auto in = open_input(config_path);
  const ldpchisq::ExperimentConfig config =
      ldpchisq::parse_experiment_config(in);
  const ldpchisq::PowerCurve curve =
      config.test == ldpchisq::TestKind::kGof
          ? ldpchisq::run_power_gof(config, workers)
          : ldpchisq::run_power_ind(config, workers);
  write_curve(config, curve);
  return 0;
}

int run_calibrate(const std::string& config_path, int workers) {
  auto in = open_input(config_path);
  ldpchisq::ExperimentConfig config = ldpchisq::parse_experiment_config(in);
  if (config.eta != 0.0) {
    throw ConfigError("calibrate runs the null; remove eta from the config");
  }
  const ldpchisq::PowerCurve curve = ldpchisq::run_type1(config, workers);
  write_curve(config, curve);
  return 0;
}

int run_noncentral(const std::string& config_path) {
  auto in = open_input(config_path);
  static const std::set<std::string> kKeys = {"format_version", "ds",
                                              "epsilons", "output"};
  const auto kv = ldpchisq::parse_kv(in, kKeys);
  const std::string version = ldpchisq::kv_string(kv, "format_version", "1");
  if (version != "1") {
    throw ConfigError("unsupported format_version: " + version);
  }
  std::vector<int> ds;
  for (std::int64_t d : ldpchisq::kv_int_list(kv, "ds")) {
    ds.push_back(static_cast<int>(d));
  }
  const std::vector<double> epsilons = ldpchisq::kv_double_list(kv, "epsilons");
  if (ds.empty() || epsilons.empty()) {
    throw ConfigError("noncentral config needs ds= and epsilons=");
  }
  const std::string output = ldpchisq::kv_string(kv, "output", "");
  if (output.empty()) throw ConfigError("noncentral config needs output=");
  const auto rows = ldpchisq::noncentral_coefficient_table(ds, epsilons);
  write_file(output, ldpchisq::coefficient_table_to_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally differentially private chi-square tests"};
  app.require_subcommand(1);

  PrivatizeArgs priv;
  CLI::App* privatize = app.add_subcommand(
      "privatize", "Apply a local randomizer to every record in a file");
  privatize->add_option("--input", priv.input, "record CSV")->required();
  privatize->add_option("--output", priv.output, "report CSV")->required();
  privatize->add_option("--mechanism", priv.mechanism,
                        "gaussian|laplace|exponential|bitflip")
      ->required();
  privatize->add_option("--epsilon", priv.epsilon, "pure LDP parameter");
  privatize->add_option("--rho", priv.rho, "zCDP parameter (gaussian)");
  privatize->add_option("--d", priv.d, "category count for `category` files");
  privatize->add_option("--r", priv.rows, "row count for `row,col` files");
  privatize->add_option("--c", priv.cols, "column count for `row,col` files");
  privatize->add_option("--seed", priv.seed, "master seed");

  GofArgs gof;
  CLI::App* gof_cmd =
      app.add_subcommand("gof", "Locally private goodness-of-fit test");
  gof_cmd->add_option("--input", gof.input, "record CSV")->required();
  gof_cmd->add_option("--uniform", gof.uniform_d,
                      "test against the uniform null over d categories");
  gof_cmd->add_option("--null", gof.null_file,
                      "file with one null probability per line");
  gof_cmd->add_option("--mechanism", gof.mechanism,
                      "gaussian|laplace|exponential|bitflip")
      ->required();
  gof_cmd->add_option("--epsilon", gof.epsilon, "pure LDP parameter");
  gof_cmd->add_option("--rho", gof.rho, "zCDP parameter (gaussian)");
  gof_cmd->add_option("--alpha", gof.alpha, "test level")
      ->check(kAlphaValidator);
  gof_cmd->add_option("--mc-samples", gof.mc_samples,
                      "Monte-Carlo sample count (laplace)");
  gof_cmd->add_option("--seed", gof.seed, "master seed");
  gof_cmd->add_option("--output", gof.output, "also write the report here");

  IndArgs ind;
  CLI::App* ind_cmd =
      app.add_subcommand("ind", "Locally private independence test");
  ind_cmd->add_option("--input", ind.input, "record CSV with row,col")
      ->required();
  ind_cmd->add_option("--r", ind.rows, "row categories")->required();
  ind_cmd->add_option("--c", ind.cols, "column categories")->required();
  ind_cmd->add_option("--mechanism", ind.mechanism,
                      "gaussian|exponential|bitflip")
      ->required();
  ind_cmd->add_option("--epsilon", ind.epsilon, "pure LDP parameter");
  ind_cmd->add_option("--rho", ind.rho, "zCDP parameter (gaussian)");
  ind_cmd->add_option("--alpha", ind.alpha, "test level")
      ->check(kAlphaValidator);
  ind_cmd->add_option("--seed", ind.seed, "master seed");
  ind_cmd->add_option("--output", ind.output, "also write the report here");

  std::string power_config;
  int power_workers = 1;
  CLI::App* power_cmd =
      app.add_subcommand("power", "Power experiment from a key=value config");
  power_cmd->add_option("--config", power_config, "config file")->required();
  power_cmd->add_option("--workers", power_workers, "worker threads");

  std::string calibrate_config;
  int calibrate_workers = 1;
  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "Type-I calibration run from a key=value config");
  calibrate_cmd->add_option("--config", calibrate_config, "config file")
      ->required();
  calibrate_cmd->add_option("--workers", calibrate_workers, "worker threads");

  std::string noncentral_config;
  CLI::App* noncentral_cmd = app.add_subcommand(
      "noncentral", "Noncentrality coefficient table from a config");
  noncentral_cmd->add_option("--config", noncentral_config, "config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (privatize->parsed()) return run_privatize(priv);
    if (gof_cmd->parsed()) return run_gof(gof);
    if (ind_cmd->parsed()) return run_ind(ind);
    if (power_cmd->parsed()) return run_power(power_config, power_workers);
    if (calibrate_cmd->parsed()) {
      return run_calibrate(calibrate_config, calibrate_workers);
    }
    if (noncentral_cmd->parsed()) return run_noncentral(noncentral_config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ldpchisq::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
