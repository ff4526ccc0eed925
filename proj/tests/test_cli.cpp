// Copyright 2026 the mfre authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the mfre binary: validate/run exit codes, output
// files, and byte-identical CSV bodies across repeated runs. Invoked by
// ctest as: test_cli <path-to-mfre> <configs-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s: %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <mfre-binary> <configs-dir>\n");
    return 2;
  }
  const std::string mfre = argv[1];
  const fs::path configs = argv[2];
  const fs::path work =
      fs::temp_directory_path() / ("mfre_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(work);

  // validate: good and broken configs
  expect(run(mfre + " validate " + (configs / "descent_check.toml").string() +
             " > /dev/null") == 0,
         "validate accepts a well-formed config");
  {
    const fs::path bad = work / "bad.toml";
    std::ofstream f(bad);
    f << "kind = \"stationary\"\nmodel = \"missing.toml\"\n[params]\nN = 10\n";
    f.close();
    expect(run(mfre + " validate " + bad.string() + " 2> /dev/null") == 1,
           "validate rejects a dangling model reference");
  }

  // run: descent-check (no model file needed)
  const fs::path out1 = work / "out1";
  const fs::path out2 = work / "out2";
  const std::string descent = (configs / "descent_check.toml").string();
  expect(run(mfre + " run " + descent + " --out-dir " + out1.string() +
             " > /dev/null") == 0,
         "run executes descent-check");
  expect(fs::exists(out1 / "descent.csv"), "descent.csv written");
  expect(fs::exists(out1 / "summary.json"), "summary.json written");

  // determinism: identical CSV bodies on a second run
  expect(run(mfre + " run " + descent + " --out-dir " + out2.string() +
             " > /dev/null") == 0,
         "run executes descent-check again");
  expect(slurp(out1 / "descent.csv") == slurp(out2 / "descent.csv"),
         "descent.csv is byte-identical across runs");

  // summary echoes inputs and names outputs
  {
    const auto summary = nlohmann::json::parse(slurp(out1 / "summary.json"));
    expect(summary["experiment"] == "descent-check", "summary names the experiment");
    expect(summary.contains("wall_time_s"), "summary has a wall time");
    expect(summary["outputs"].size() >= 1, "summary lists outputs");
  }

  // run: ode on the bundled model
  const fs::path out3 = work / "out3";
  expect(run(mfre + " run " + (configs / "ode.toml").string() + " --out-dir " +
             out3.string() + " > /dev/null") == 0,
         "run executes ode");
  expect(fs::exists(out3 / "trajectory.csv"), "trajectory.csv written");
  {
    // CSV: comment preamble then header then CRLF rows
    const std::string body = slurp(out3 / "trajectory.csv");
    expect(body.rfind("# column t:", 0) == 0, "csv documents its columns");
    expect(body.find("\r\n") != std::string::npos, "csv uses CRLF line endings");
  }

  // run: entropy-limit (small N sweep)
  const fs::path out4 = work / "out4";
  expect(run(mfre + " run " + (configs / "entropy_limit.toml").string() +
             " --out-dir " + out4.string() + " > /dev/null") == 0,
         "run executes entropy-limit");
  expect(fs::exists(out4 / "entropy_limit.csv"), "entropy_limit.csv written");

  // run: simulate with explicit seed override changes outputs deterministically
  const fs::path out5 = work / "out5";
  const fs::path out6 = work / "out6";
  const std::string simulate = (configs / "simulate.toml").string();
  expect(run(mfre + " run " + simulate + " --out-dir " + out5.string() +
             " --seed 9 > /dev/null") == 0,
         "run executes simulate");
  expect(run(mfre + " run " + simulate + " --out-dir " + out6.string() +
             " --seed 9 > /dev/null") == 0,
         "run executes simulate again");
  expect(slurp(out5 / "snapshots.csv") == slurp(out6 / "snapshots.csv"),
         "snapshots.csv deterministic for a fixed seed");

  // run: jt and quasipotential (tiny settings, still end-to-end)
  const fs::path out7 = work / "out7";
  expect(run(mfre + " run " + (configs / "jt.toml").string() + " --out-dir " +
             out7.string() + " > /dev/null") == 0,
         "run executes jt");
  expect(fs::exists(out7 / "jt.csv"), "jt.csv written");
  const fs::path out8 = work / "out8";
  expect(run(mfre + " run " + (configs / "quasipotential.toml").string() +
             " --out-dir " + out8.string() + " > /dev/null") == 0,
         "run executes quasipotential");
  expect(fs::exists(out8 / "quasipotential.csv"), "quasipotential.csv written");
  expect(fs::exists(out8 / "optimal_path.csv"), "optimal_path.csv written");

  // run: stationary
  const fs::path out9 = work / "out9";
  expect(run(mfre + " run " + (configs / "stationary.toml").string() +
             " --out-dir " + out9.string() + " > /dev/null") == 0,
         "run executes stationary");
  expect(fs::exists(out9 / "stationary_N20.csv"), "stationary csv written");

  fs::remove_all(work);
  std::printf("%s\n", failures == 0 ? "CLI: all checks passed" : "CLI: FAILURES");
  return failures == 0 ? 0 : 1;
}
