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
// Integration tests driving the installed command line binary through a
// shell. The binary path comes from the build system.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#ifndef LDPCHISQ_CLI_PATH
#define LDPCHISQ_CLI_PATH "ldpchisq"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_path =
      (fs::temp_directory_path() / "ldpchisq_cli_test_stdout.txt").string();
  const std::string command = env + " " + std::string(LDPCHISQ_CLI_PATH) +
                              " " + args + " > " + out_path + " 2>/dev/null";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  result.stdout_text = ss.str();
  return result;
}

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string null_records(int n, int d) {
  std::ostringstream out;
  out << "category\n";
  for (int i = 0; i < n; ++i) out << (i % d) << "\n";
  return out.str();
}

TEST_CASE("gof command: decision exit codes and report schema") {
  const fs::path recs = temp_file("cli_gof.csv", null_records(2000, 4));
  const RunResult ok = run_cli("gof --input " + recs.string() +
                               " --uniform 4 --mechanism exponential "
                               "--epsilon 2 --seed 11");
  CHECK(ok.exit_code == 0);
  const auto j = nlohmann::json::parse(ok.stdout_text);
  CHECK(j["test"] == "gof");
  CHECK(j["decision"] == "fail_to_reject");
  CHECK(j["seed"] == 11);
  CHECK(j["format_version"] == 1);

  // Far-from-uniform data must reject (exit 3).
  std::ostringstream skew;
  skew << "category\n";
  for (int i = 0; i < 2000; ++i) skew << (i % 2) << "\n";
  const fs::path skew_path = temp_file("cli_gof_skew.csv", skew.str());
  const RunResult rej = run_cli("gof --input " + skew_path.string() +
                                " --uniform 4 --mechanism exponential "
                                "--epsilon 4 --seed 11");
  CHECK(rej.exit_code == 3);
  CHECK(nlohmann::json::parse(rej.stdout_text)["decision"] == "reject");
}

TEST_CASE("gof command usage errors exit 1") {
  const fs::path recs = temp_file("cli_gof_u.csv", null_records(100, 4));
  CHECK(run_cli("gof --input " + recs.string() +
                " --uniform 4 --mechanism exponential --epsilon 2 "
                "--alpha 1.5")
            .exit_code == 1);
  // Laplace without --mc-samples.
  CHECK(run_cli("gof --input " + recs.string() +
                " --uniform 4 --mechanism laplace --epsilon 2 --seed 1")
            .exit_code == 1);
  // m <= ceil(1/alpha).
  CHECK(run_cli("gof --input " + recs.string() +
                " --uniform 4 --mechanism laplace --epsilon 2 "
                "--mc-samples 10 --alpha 0.05 --seed 1")
            .exit_code == 1);
  // Missing the mechanism parameter entirely.
  CHECK(run_cli("gof --input " + recs.string() +
                " --uniform 4 --mechanism gaussian --seed 1")
            .exit_code == 1);
  CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("gof command data errors exit 2") {
  const fs::path bad = temp_file("cli_bad.csv", "category\n9\n");
  CHECK(run_cli("gof --input " + bad.string() +
                " --uniform 4 --mechanism exponential --epsilon 2 --seed 1")
            .exit_code == 2);
  const fs::path no_header = temp_file("cli_nohdr.csv", "0\n1\n");
  CHECK(run_cli("gof --input " + no_header.string() +
                " --uniform 4 --mechanism exponential --epsilon 2 --seed 1")
            .exit_code == 2);
  // Null distribution with a zero entry.
  const fs::path zero_null = temp_file("cli_null.txt", "1.0\n0.0\n");
  const fs::path recs = temp_file("cli_gof_d.csv", null_records(100, 2));
  CHECK(run_cli("gof --input " + recs.string() + " --null " +
                zero_null.string() +
                " --mechanism exponential --epsilon 2 --seed 1")
            .exit_code == 2);
}

TEST_CASE("laplace branch via cli reports the mc rank") {
  const fs::path recs = temp_file("cli_lap.csv", null_records(500, 3));
  const RunResult res = run_cli("gof --input " + recs.string() +
                                " --uniform 3 --mechanism laplace --epsilon 2 "
                                "--mc-samples 99 --seed 5");
  CHECK((res.exit_code == 0 || res.exit_code == 3));
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["p_value"].is_null());
  CHECK(j.contains("mc_rank"));
}

TEST_CASE("ind command round trip, guard, and validation") {
  std::ostringstream pairs;
  pairs << "row,col\n";
  for (int i = 0; i < 4000; ++i) pairs << (i % 2) << "," << ((i / 2) % 2)
                                       << "\n";
  const fs::path path = temp_file("cli_ind.csv", pairs.str());
  const RunResult res = run_cli("ind --input " + path.string() +
                                " --r 2 --c 2 --mechanism bitflip --epsilon 2 "
                                "--seed 3");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["dof"] == 1);
  CHECK(j["r"] == 2);
  CHECK(j["guard_triggered"] == false);

  // r = 1 is invalid.
  CHECK(run_cli("ind --input " + path.string() +
                " --r 1 --c 2 --mechanism bitflip --epsilon 2 --seed 3")
            .exit_code == 2);

  // Tiny n triggers the guard.
  const fs::path tiny =
      temp_file("cli_ind_tiny.csv", "row,col\n0,0\n0,1\n1,0\n1,1\n");
  const RunResult guard = run_cli("ind --input " + tiny.string() +
                                  " --r 2 --c 2 --mechanism exponential "
                                  "--epsilon 2 --seed 3");
  CHECK(guard.exit_code == 0);
  CHECK(nlohmann::json::parse(guard.stdout_text)["guard_triggered"] == true);
}

TEST_CASE("seed precedence: flag beats environment, env beats entropy") {
  const fs::path recs = temp_file("cli_seed.csv", null_records(200, 4));
  const std::string base = "gof --input " + recs.string() +
                           " --uniform 4 --mechanism exponential --epsilon 2";
  const RunResult flag1 = run_cli(base + " --seed 42");
  const RunResult flag2 =
      run_cli(base + " --seed 42", "LDP_CHISQ_SEED=7");
  CHECK(nlohmann::json::parse(flag1.stdout_text)["seed"] == 42);
  CHECK(nlohmann::json::parse(flag2.stdout_text)["seed"] == 42);
  CHECK(flag1.stdout_text == flag2.stdout_text);

  const RunResult env_only = run_cli(base, "LDP_CHISQ_SEED=7");
  CHECK(nlohmann::json::parse(env_only.stdout_text)["seed"] == 7);

  // Without any seed the report still carries one, drawn from the OS.
  const RunResult entropy = run_cli(base);
  CHECK(nlohmann::json::parse(entropy.stdout_text).contains("seed"));
}

TEST_CASE("privatize determinism and parse errors") {
  const fs::path recs = temp_file("cli_priv.csv", null_records(50, 4));
  const fs::path out1 = fs::temp_directory_path() / "cli_priv_out1.csv";
  const fs::path out2 = fs::temp_directory_path() / "cli_priv_out2.csv";
  const std::string base = "privatize --input " + recs.string() +
                           " --d 4 --mechanism bitflip --epsilon 2 --seed 9 "
                           "--output ";
  CHECK(run_cli(base + out1.string()).exit_code == 0);
  CHECK(run_cli(base + out2.string()).exit_code == 0);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(read_file(out1).find("bits") != std::string::npos);

  const fs::path no_header = temp_file("cli_priv_bad.csv", "1\n2\n");
  CHECK(run_cli("privatize --input " + no_header.string() +
                " --d 4 --mechanism bitflip --epsilon 2 --seed 9 --output " +
                out1.string())
            .exit_code == 2);
}

TEST_CASE("privatize with enormous epsilon is the identity on categories") {
  const fs::path recs = temp_file("cli_priv_id.csv", "category\n2\n0\n3\n");
  const fs::path out = fs::temp_directory_path() / "cli_priv_id_out.csv";
  CHECK(run_cli("privatize --input " + recs.string() +
                " --d 4 --mechanism exponential --epsilon 40 --seed 1 "
                "--output " +
                out.string())
            .exit_code == 0);
  const std::string text = read_file(out);
  CHECK(text.find("category\n2\n0\n3\n") != std::string::npos);
}

TEST_CASE("experiment commands write csv plus sidecar and reject bad configs") {
  const fs::path csv_out = fs::temp_directory_path() / "cli_power.csv";
  const std::string config_text =
      "test = gof\n"
      "mechanisms = exponential\n"
      "d = 4\n"
      "epsilons = 2\n"
      "ns = 1000\n"
      "eta = 0.01\n"
      "trials = 50\n"
      "seed = 5\n"
      "output = " +
      csv_out.string() + "\n";
  const fs::path config = temp_file("cli_power.cfg", config_text);
  CHECK(run_cli("power --config " + config.string() + " --workers 2")
            .exit_code == 0);
  const std::string csv = read_file(csv_out);
  CHECK(csv.find("# format_version=1") == 0);
  CHECK(csv.find("gof,exponential,2,4") != std::string::npos);
  const std::string sidecar = read_file(fs::path(csv_out.string() + ".meta"));
  CHECK(sidecar.find("seed=5") != std::string::npos);
  CHECK(sidecar.find("test=gof") != std::string::npos);

  // Unknown keys are named in the error.
  const fs::path bad =
      temp_file("cli_power_bad.cfg", config_text + "zzz_key = 1\n");
  CHECK(run_cli("power --config " + bad.string()).exit_code == 2);

  // Odd d with an eta pattern.
  const fs::path odd = temp_file("cli_power_odd.cfg",
                                 "test = gof\nmechanisms = exponential\n"
                                 "d = 5\nepsilons = 2\nns = 1000\n"
                                 "eta = 0.01\ntrials = 10\noutput = x.csv\n");
  CHECK(run_cli("power --config " + odd.string()).exit_code == 2);

  // Reruns are byte-identical.
  const fs::path csv_out2 = fs::temp_directory_path() / "cli_power2.csv";
  const fs::path config2 = temp_file(
      "cli_power2.cfg", config_text.substr(0, config_text.find("output")) +
                            "output = " + csv_out2.string() + "\n");
  CHECK(run_cli("power --config " + config2.string() + " --workers 4")
            .exit_code == 0);
  std::string first = read_file(csv_out);
  std::string second = read_file(csv_out2);
  CHECK(first == second);
}

TEST_CASE("calibrate command runs the null and rejects eta configs") {
  const fs::path csv_out = fs::temp_directory_path() / "cli_cal.csv";
  const fs::path config = temp_file("cli_cal.cfg",
                                    "test = gof\nmechanisms = bitflip\n"
                                    "d = 4\nepsilons = 2\nns = 2000\n"
                                    "trials = 100\nseed = 6\noutput = " +
                                        csv_out.string() + "\n");
  CHECK(run_cli("calibrate --config " + config.string()).exit_code == 0);
  CHECK(read_file(csv_out).find("gof,bitflip") != std::string::npos);

  const fs::path with_eta = temp_file("cli_cal_eta.cfg",
                                      "test = gof\nmechanisms = bitflip\n"
                                      "d = 4\nepsilons = 2\nns = 2000\n"
                                      "eta = 0.01\ntrials = 100\noutput = " +
                                          csv_out.string() + "\n");
  CHECK(run_cli("calibrate --config " + with_eta.string()).exit_code == 2);
}

TEST_CASE("noncentral command emits the 48-row coefficient table") {
  const fs::path csv_out = fs::temp_directory_path() / "cli_fig.csv";
  const fs::path config = temp_file("cli_fig.cfg",
                                    "ds = 4, 10, 40, 100\n"
                                    "epsilons = 1, 2, 3, 4\n"
                                    "output = " +
                                        csv_out.string() + "\n");
  CHECK(run_cli("noncentral --config " + config.string()).exit_code == 0);
  const std::string csv = read_file(csv_out);
  int lines = 0;
  for (char ch : csv) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 50);  // comment + header + 48 rows
  CHECK(csv.find("4,1,exponential,0.361177") != std::string::npos);
}

}  // namespace
