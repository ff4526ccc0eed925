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

#ifndef MFRE_EXPERIMENTS_HPP
#define MFRE_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "mfre/model_io.hpp"

// Configuration-driven experiment runner behind the CLI. A config names an
// experiment kind, usually a model file, and a parameter table; running it
// writes plot-ready CSV tables plus a JSON summary (inputs echoed, version,
// seeds, wall time, headline numbers). CSV bodies are deterministic for
// fixed seeds; timestamps only appear in the JSON summary.
//
// Kinds: ode | simulate | stationary | entropy-limit | descent-check | jt |
// quasipotential.

namespace mfre {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> lattice_cap;
  std::optional<int> threads;
};

struct ExperimentConfig {
  std::string kind;
  std::string config_path;
  std::string model_path;  // empty when the kind does not need one
  nlohmann::json params;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::size_t lattice_cap = LatticeEnumeration::kDefaultCap;
};

ExperimentConfig load_experiment_config(const std::string& path,
                                        const RunOverrides& overrides);

// Schema and cap checks without executing; diagnostics carry field paths.
Diagnostics validate_experiment(const std::string& path, const RunOverrides& overrides);

// Executes the experiment; returns 0 on success. Output files are staged in
// memory and only written once the run finished, so failures leave nothing
// half-written behind.
int run_experiment(const std::string& path, const RunOverrides& overrides);

}  // namespace mfre

#endif  // MFRE_EXPERIMENTS_HPP
