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

#ifndef MFRE_MODEL_IO_HPP
#define MFRE_MODEL_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "mfre/gibbs.hpp"

// Model definition files (TOML or JSON, detected by extension then content):
//
//   d = 2
//   labels = ["up", "down"]          # optional
//   dynamics = "metropolis"          # metropolis | heat_bath | symmetrized
//   [potential.affine]               # or [potential.quadratic]
//   V = [0.0, 0.0]
//   W = [[0.0, 1.0], [1.0, 0.0]]
//   beta = 0.5
//   [adjacency]                      # optional; default complete graph
//   matrix = [[0, 1], [1, 0]]
//
// quadratic adds S = [[...]] and kappa to the affine fields.

namespace mfre {

struct ModelFile {
  StateSpace space;
  GibbsModel model;
  std::string source_path;
};

// Collects human-readable problems instead of throwing; empty = valid.
struct Diagnostics {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  void add(const std::string& field, const std::string& what) {
    problems.push_back(field + ": " + what);
  }
};

nlohmann::json load_structured_file(const std::string& path);

// Throws std::runtime_error listing every problem found.
ModelFile load_model_file(const std::string& path);

// Validation without construction; fills diagnostics.
void check_model_document(const nlohmann::json& doc, Diagnostics& diag);

}  // namespace mfre

#endif  // MFRE_MODEL_IO_HPP
