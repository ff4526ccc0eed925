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

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mfre/gibbs.hpp"
#include "mfre/lattice_chain.hpp"
#include "mfre/parallel.hpp"

using namespace mfre;

namespace {

// dense reference for the uniformized kernel action
Vec dense_apply(const LatticeGenerator& gen, double lambda, const Vec& v) {
  const std::size_t n = gen.diag.size();
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] += v[i] * (1.0 + gen.diag[i] / lambda);
    for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
      out[gen.col[e]] += v[i] * gen.rate[e] / lambda;
  }
  return out;
}

LatticeGenerator test_generator() {
  const GibbsModel model =
      make_gibbs_model(AffinePotential{{0.1, -0.2, 0.3},
                                       Matrix(3, {0.0, 0.4, 0.8, 0.4, 0.0, 0.2,
                                                  0.8, 0.2, 0.0}),
                                       0.9},
                       Adjacency::complete(3));
  return build_generator(prelimit_rate_family(model, 30), 30);
}

}  // namespace

TEST_CASE("kernel application matches the dense reference") {
  const LatticeGenerator gen = test_generator();
  const double lambda = gen.uniformization_lambda();
  const TransitionKernel kernel = gen.uniformized_kernel(lambda);
  std::mt19937_64 rng(3);
  Vec v(gen.diag.size());
  double sum = 0.0;
  for (double& x : v) {
    x = static_cast<double>(rng() % 1000) + 1.0;
    sum += x;
  }
  for (double& x : v) x /= sum;

  const Vec reference = dense_apply(gen, lambda, v);
  Vec serial(v.size()), parallel_out(v.size());
  apply_kernel(kernel, v, serial, Exec::serial);
  apply_kernel(kernel, v, parallel_out, Exec::parallel);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(serial[i] == doctest::Approx(reference[i]).epsilon(1e-13));
    // one writer per output index: parallel result is bit-identical
    CHECK(parallel_out[i] == serial[i]);
  }
  // stochasticity: total mass is preserved
  double total = 0.0;
  for (double x : serial) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("blocked reductions are exec-independent") {
  std::mt19937_64 rng(5);
  Vec a(100000), b(100000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::sin(0.001 * static_cast<double>(i)) / (1.0 + (i % 17));
    b[i] = std::cos(0.002 * static_cast<double>(i));
  }
  CHECK(blocked_sum(a, Exec::serial) == blocked_sum(a, Exec::parallel));
  CHECK(blocked_dot(a, b, Exec::serial) == blocked_dot(a, b, Exec::parallel));
  // and consistent with a long-double reference
  long double ref = 0.0L;
  for (double x : a) ref += x;
  CHECK(std::abs(blocked_sum(a, Exec::serial) - static_cast<double>(ref)) <
        1e-12 * std::abs(static_cast<double>(ref)));
}

TEST_CASE("parallel_for covers the index range once and propagates errors") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, [&](std::size_t i) { hits[i].fetch_add(1); }, Exec::parallel);
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(
                      64,
                      [](std::size_t i) {
                        if (i == 13) throw std::runtime_error("boom");
                      },
                      Exec::parallel),
                  std::runtime_error);
}

TEST_CASE("serial and parallel transient solves agree") {
  const LatticeGenerator gen = test_generator();
  const LatticeDistribution init =
      point_mass_nearest(gen.lattice, ProbabilityVector::uniform(3));
  const TransientResult serial = transient_distribution(gen, init, 1.5, 1e-10, Exec::serial);
  const TransientResult parallel_res =
      transient_distribution(gen, init, 1.5, 1e-10, Exec::parallel);
  REQUIRE(serial.dist.size() == parallel_res.dist.size());
  for (std::size_t i = 0; i < serial.dist.size(); ++i)
    CHECK(serial.dist.weights[i] == parallel_res.dist.weights[i]);
}

TEST_CASE("serial and parallel entropy sums agree") {
  const LatticeGenerator gen = test_generator();
  const GibbsModel model =
      make_gibbs_model(AffinePotential{{0.1, -0.2, 0.3},
                                       Matrix(3, {0.0, 0.4, 0.8, 0.4, 0.0, 0.2,
                                                  0.8, 0.2, 0.0}),
                                       0.9},
                       Adjacency::complete(3));
  const LatticeDistribution m = gibbs_pushforward(gen.lattice, model);
  const ProbabilityVector q({0.2, 0.5, 0.3});
  CHECK(scaled_product_entropy(q, m, Exec::serial) ==
        scaled_product_entropy(q, m, Exec::parallel));
}

TEST_CASE("thread settings") {
  const int before = max_threads();
  set_max_threads(3);
  CHECK(max_threads() == (openmp_enabled() ? 3 : 1));
  set_max_threads(before);
}
