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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "mfre/csv.hpp"
#include "mfre/experiments.hpp"
#include "mfre/model_io.hpp"
#include "mfre/tomlite.hpp"

using namespace mfre;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mfre_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream f(p);
    f << content;
    return p.string();
  }
};

const char* kCurieWeissToml = R"(# two-state mean-field ferromagnet
d = 2
labels = ["up", "down"]
dynamics = "metropolis"

[potential.affine]
V = [0.0, 0.0]
W = [[0.0, 1.0], [1.0, 0.0]]
beta = 0.5

[adjacency]
matrix = [[0, 1], [1, 0]]
)";

const char* kCurieWeissJson = R"({
  "d": 2,
  "labels": ["up", "down"],
  "dynamics": "metropolis",
  "potential": {"affine": {"V": [0.0, 0.0], "W": [[0.0, 1.0], [1.0, 0.0]], "beta": 0.5}},
  "adjacency": {"matrix": [[0, 1], [1, 0]]}
})";

}  // namespace

TEST_CASE("tomlite parses the subset") {
  const auto doc = tomlite::parse(R"(
# comment
title = "hello \"world\""
count = 42
ratio = -0.75
flag = true
dotted.key = 7

[table]
vec = [1, 2, 3]
mat = [[1.0, 2.0], [3.0, 4.0]]  # trailing comment

[deep.nested]
value = 1e-3
)");
  CHECK(doc["title"] == "hello \"world\"");
  CHECK(doc["count"] == 42);
  CHECK(doc["ratio"] == -0.75);
  CHECK(doc["flag"] == true);
  CHECK(doc["dotted"]["key"] == 7);
  CHECK(doc["table"]["vec"].size() == 3);
  CHECK(doc["table"]["mat"][1][0] == 3.0);
  CHECK(doc["deep"]["nested"]["value"].get<double>() == doctest::Approx(1e-3));
}

TEST_CASE("tomlite rejects malformed input") {
  CHECK_THROWS(tomlite::parse("a = "));
  CHECK_THROWS(tomlite::parse("a = 1\na = 2"));
  CHECK_THROWS(tomlite::parse("a = [1, 2"));
  CHECK_THROWS(tomlite::parse("= 3"));
  CHECK_THROWS(tomlite::parse("a = zebra"));
}

TEST_CASE("model files load identically from TOML and JSON") {
  TempDir tmp;
  const ModelFile toml_model = load_model_file(tmp.write("cw.toml", kCurieWeissToml));
  const ModelFile json_model = load_model_file(tmp.write("cw.json", kCurieWeissJson));
  CHECK(toml_model.space.d == 2);
  CHECK(toml_model.space.labels[0] == "up");
  const Vec p = {0.3, 0.7};
  const Matrix a = limit_rate_family(toml_model.model).rates(p);
  const Matrix b = limit_rate_family(json_model.model).rates(p);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(a.at(x, y) == b.at(x, y));
  // matches the built-in constructor
  const Matrix c = limit_rate_family(curie_weiss(0.5)).rates(p);
  CHECK(a.at(0, 1) == c.at(0, 1));
}

TEST_CASE("model file diagnostics carry field paths") {
  TempDir tmp;
  {
    Diagnostics diag;
    check_model_document(tomlite::parse("d = 2\n[potential.affine]\nV = [0.0, 0.0]\nbeta = 1.0\n"),
                         diag);
    REQUIRE_FALSE(diag.ok());
    bool named = false;
    for (const auto& p : diag.problems) named = named || p.rfind("potential.affine.W", 0) == 0;
    CHECK(named);
  }
  {
    Diagnostics diag;
    check_model_document(
        tomlite::parse("d = 2\n[potential.affine]\nV = [0.0, 0.0]\nW = [[0.0, 1.0], "
                       "[1.0, 0.0]]\nbeta = 1.0\n[adjacency]\nkind = \"complete\"\n"),
        diag);
    REQUIRE_FALSE(diag.ok());
    bool named = false;
    for (const auto& p : diag.problems) named = named || p.rfind("adjacency.matrix", 0) == 0;
    CHECK(named);
  }
  {
    // disconnected adjacency is rejected with the validator's message
    Diagnostics diag;
    check_model_document(
        tomlite::parse("d = 2\n[potential.affine]\nV = [0.0, 0.0]\nW = [[0.0, 1.0], "
                       "[1.0, 0.0]]\nbeta = 1.0\n[adjacency]\nmatrix = [[0, 0], [0, 0]]\n"),
        diag);
    CHECK_FALSE(diag.ok());
  }
}

TEST_CASE("quadratic model files round through") {
  TempDir tmp;
  const std::string path = tmp.write("quad.toml", R"(
d = 2
[potential.quadratic]
V = [0.1, -0.1]
W = [[0.0, 0.5], [0.5, 0.0]]
beta = 0.7
S = [[0.2, 0.0], [0.0, 0.4]]
kappa = 1.1
)");
  const ModelFile mf = load_model_file(path);
  CHECK_FALSE(mf.model.affine.has_value());
  // K^0((p0,p1)) = 0.1 + 0.35 p1 + 0.5*1.1*(0.2 p0)^2
  const Vec p = {0.6, 0.4};
  const double expect = 0.1 + 0.7 * 0.5 * 0.4 + 0.55 * 0.12 * 0.12;
  CHECK(mf.model.potential.value(0, p) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("experiment validation") {
  TempDir tmp;
  const std::string model_path = tmp.write("cw.toml", kCurieWeissToml);
  {
    const std::string cfg = tmp.write("good.toml", R"(
kind = "entropy-limit"
model = "cw.toml"
[params]
N = [10, 20]
q = [[0.5, 0.5]]
)");
    const Diagnostics diag = validate_experiment(cfg, {});
    CHECK(diag.ok());
  }
  {
    const std::string cfg = tmp.write("missing_model.toml", R"(
kind = "ode"
model = "nope.toml"
[params]
p0 = [0.5, 0.5]
horizon = 1.0
step = 0.01
)");
    const Diagnostics diag = validate_experiment(cfg, {});
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.problems[0].rfind("model", 0) == 0);
  }
  {
    // N above the lattice cap reports the computed size
    const std::string cfg = tmp.write("over_cap.toml", R"(
kind = "stationary"
model = "cw.toml"
lattice_cap = 100
[params]
N = 500
)");
    const Diagnostics diag = validate_experiment(cfg, {});
    REQUIRE_FALSE(diag.ok());
    bool cap_mentioned = false;
    for (const auto& p : diag.problems)
      cap_mentioned = cap_mentioned || p.find("above the cap") != std::string::npos;
    CHECK(cap_mentioned);
  }
  {
    const std::string cfg = tmp.write("bad_kind.toml", "kind = \"plot\"\n");
    CHECK_FALSE(validate_experiment(cfg, {}).ok());
  }
  {
    // overrides patch the cap
    const std::string cfg = tmp.write("cap_ok.toml", R"(
kind = "stationary"
model = "cw.toml"
lattice_cap = 100
[params]
N = 500
)");
    RunOverrides overrides;
    overrides.lattice_cap = 50000;
    CHECK(validate_experiment(cfg, overrides).ok());
  }
}

TEST_CASE("csv helpers") {
  CHECK(csv::real(0.5) == "0.5");
  CHECK(csv::real(1.0 / 3.0) == "0.33333333333333331");
  CHECK(csv::quote_if_needed("plain") == "plain");
  CHECK(csv::quote_if_needed("a,b") == "\"a,b\"");
  CHECK(csv::quote_if_needed("say \"hi\"") == "\"say \"\"hi\"\"\"");
  // 17 significant digits round-trip
  const double v = 0.1234567890123456789;
  CHECK(std::stod(csv::real(v)) == v);
}
