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

#include "mfre/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mfre/tomlite.hpp"

namespace mfre {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool numeric_vector(const json& j, int d, Vec& out) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) return false;
  out.assign(d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_number()) return false;
    out[i] = j[i].get<double>();
  }
  return true;
}

bool numeric_matrix(const json& j, int d, Matrix& out) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) return false;
  out = Matrix(d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d) return false;
    for (int c = 0; c < d; ++c) {
      if (!j[r][c].is_number()) return false;
      out.at(r, c) = j[r][c].get<double>();
    }
  }
  return true;
}

}  // namespace

json load_structured_file(const std::string& path) {
  const std::string text = read_file(path);
  const bool json_ext = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (json_ext) return json::parse(text);
  const bool toml_ext = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  if (toml_ext) return tomlite::parse(text);
  // no known extension: sniff a leading brace
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    if (c == '{') return json::parse(text);
    break;
  }
  return tomlite::parse(text);
}

void check_model_document(const json& doc, Diagnostics& diag) {
  if (!doc.is_object()) {
    diag.add("(root)", "expected a table/object");
    return;
  }
  int d = 0;
  if (!doc.contains("d") || !doc["d"].is_number_integer()) {
    diag.add("d", "missing or not an integer");
  } else {
    d = doc["d"].get<int>();
    if (d < 2) diag.add("d", "must be >= 2");
  }
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array() || (d > 0 && static_cast<int>(l.size()) != d))
      diag.add("labels", "must be an array of d strings");
  }
  if (doc.contains("dynamics")) {
    if (!doc["dynamics"].is_string()) {
      diag.add("dynamics", "must be a string");
    } else {
      const std::string kind = doc["dynamics"].get<std::string>();
      if (kind != "metropolis" && kind != "heat_bath" && kind != "symmetrized")
        diag.add("dynamics", "unknown kind '" + kind + "'");
    }
  }
  if (!doc.contains("potential") || !doc["potential"].is_object()) {
    diag.add("potential", "missing table");
    return;
  }
  const auto& pot = doc["potential"];
  const bool affine = pot.contains("affine");
  const bool quadratic = pot.contains("quadratic");
  if (affine == quadratic) {
    diag.add("potential", "exactly one of 'affine' or 'quadratic' is required");
    return;
  }
  const auto& body = affine ? pot["affine"] : pot["quadratic"];
  if (!body.is_object()) {
    diag.add(affine ? "potential.affine" : "potential.quadratic", "expected a table");
    return;
  }
  const std::string prefix = affine ? "potential.affine." : "potential.quadratic.";
  if (d >= 2) {
    Vec v;
    Matrix m;
    if (!body.contains("V") || !numeric_vector(body["V"], d, v))
      diag.add(prefix + "V", "missing or not a length-d numeric array");
    if (!body.contains("W") || !numeric_matrix(body["W"], d, m))
      diag.add(prefix + "W", "missing or not a d x d numeric matrix");
    if (!body.contains("beta") || !body["beta"].is_number())
      diag.add(prefix + "beta", "missing or not a number");
    else if (body["beta"].get<double>() <= 0.0)
      diag.add(prefix + "beta", "must be positive");
    if (quadratic) {
      if (!body.contains("S") || !numeric_matrix(body["S"], d, m))
        diag.add(prefix + "S", "missing or not a d x d numeric matrix");
      if (!body.contains("kappa") || !body["kappa"].is_number())
        diag.add(prefix + "kappa", "missing or not a number");
    }
  }
  if (doc.contains("adjacency")) {
    if (!doc["adjacency"].is_object() || !doc["adjacency"].contains("matrix")) {
      diag.add("adjacency.matrix", "missing matrix");
    } else if (d >= 2) {
      Matrix m;
      if (!numeric_matrix(doc["adjacency"]["matrix"], d, m)) {
        diag.add("adjacency.matrix", "not a d x d numeric matrix");
      } else {
        try {
          Adjacency check(m);
        } catch (const std::exception& e) {
          diag.add("adjacency.matrix", e.what());
        }
      }
    }
  }
}

ModelFile load_model_file(const std::string& path) {
  const json doc = load_structured_file(path);
  Diagnostics diag;
  check_model_document(doc, diag);
  if (!diag.ok()) {
    std::string msg = "invalid model file " + path + ":";
    for (const auto& p : diag.problems) msg += "\n  - " + p;
    throw std::runtime_error(msg);
  }

  const int d = doc["d"].get<int>();
  StateSpace space =
      doc.contains("labels")
          ? StateSpace(d, doc["labels"].get<std::vector<std::string>>())
          : StateSpace(d);
  const DynamicsKind kind =
      doc.contains("dynamics")
          ? dynamics_kind_from_string(doc["dynamics"].get<std::string>())
          : DynamicsKind::metropolis;
  Adjacency adj = Adjacency::complete(d);
  if (doc.contains("adjacency")) {
    Matrix m;
    numeric_matrix(doc["adjacency"]["matrix"], d, m);
    adj = Adjacency(std::move(m));
  }

  const auto& pot = doc["potential"];
  if (pot.contains("affine")) {
    const auto& body = pot["affine"];
    AffinePotential ap;
    numeric_vector(body["V"], d, ap.V);
    numeric_matrix(body["W"], d, ap.W);
    ap.beta = body["beta"].get<double>();
    return ModelFile{std::move(space),
                     make_gibbs_model(std::move(ap), std::move(adj), kind), path};
  }
  const auto& body = pot["quadratic"];
  QuadraticPotential qp;
  numeric_vector(body["V"], d, qp.V);
  numeric_matrix(body["W"], d, qp.W);
  qp.beta = body["beta"].get<double>();
  numeric_matrix(body["S"], d, qp.S);
  qp.kappa = body["kappa"].get<double>();
  return ModelFile{std::move(space),
                   make_gibbs_model(std::move(qp), std::move(adj), kind), path};
}

}  // namespace mfre
