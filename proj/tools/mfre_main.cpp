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

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "mfre/experiments.hpp"
#include "mfre/parallel.hpp"

// mfre: experiment runner for mean-field Markov particle systems.
//
//   mfre run <config> [--seed S] [--out-dir DIR] [--threads T] [--cap K]
//   mfre validate <config>
//
// The MFRE_THREADS environment variable overrides any thread setting.

int main(int argc, char** argv) {
  CLI::App app{"mean-field particle systems, entropy limits, and action functionals"};
  app.require_subcommand(1);

  std::string config_path;
  mfre::RunOverrides overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t cap = 0;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config (TOML or JSON)")
        ->required();
    cmd->add_option("--seed", seed, "override the master seed");
    cmd->add_option("--out-dir", out_dir, "override the output directory");
    cmd->add_option("--threads", threads, "worker thread count");
    cmd->add_option("--cap", cap, "lattice size cap");
  };

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  add_common(run);
  CLI::App* validate =
      app.add_subcommand("validate", "check a config without executing it");
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  if (run->count("--seed") || validate->count("--seed")) overrides.seed = seed;
  if (run->count("--out-dir") || validate->count("--out-dir")) overrides.out_dir = out_dir;
  if (run->count("--cap") || validate->count("--cap")) overrides.lattice_cap = cap;
  if (run->count("--threads") || validate->count("--threads")) overrides.threads = threads;
  if (const char* env = std::getenv("MFRE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) overrides.threads = n;  // environment wins
  }
  if (overrides.threads) mfre::set_max_threads(*overrides.threads);

  try {
    if (validate->parsed()) {
      const mfre::Diagnostics diag = mfre::validate_experiment(config_path, overrides);
      if (diag.ok()) {
        std::printf("ok: %s\n", config_path.c_str());
        return 0;
      }
      for (const auto& p : diag.problems)
        std::fprintf(stderr, "problem: %s\n", p.c_str());
      return 1;
    }
    return mfre::run_experiment(config_path, overrides);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
