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

#include <algorithm>
#include <cmath>
#include <random>

#include "mfre/simplex.hpp"

using namespace mfre;

namespace {

ProbabilityVector random_point(std::mt19937_64& rng, int d) {
  std::exponential_distribution<double> exp1(1.0);
  Vec w(d);
  for (double& v : w) v = exp1(rng);
  return ProbabilityVector::renormalized(std::move(w));
}

}  // namespace

TEST_CASE("probability vector validation") {
  CHECK_THROWS(ProbabilityVector({0.5, 0.6}));
  CHECK_THROWS(ProbabilityVector({1.2, -0.2}));
  CHECK_THROWS(ProbabilityVector(Vec{}));
  CHECK_NOTHROW(ProbabilityVector({0.25, 0.75}));
  // renormalization is explicit, never silent
  const ProbabilityVector p = ProbabilityVector::renormalized({2.0, 6.0});
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ProbabilityVector::uniform(4)[2] == doctest::Approx(0.25));
  CHECK(ProbabilityVector::vertex(3, 1)[1] == 1.0);
  CHECK_FALSE(ProbabilityVector::vertex(3, 1).interior());
  CHECK(ProbabilityVector::uniform(3).interior());
}

TEST_CASE("relative entropy basics") {
  const ProbabilityVector p({0.3, 0.7});
  CHECK(relative_entropy(p, p) == 0.0);
  CHECK(relative_entropy(ProbabilityVector({1.0, 0.0}), ProbabilityVector::uniform(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // extended-precision direct-sum oracle, frozen:
  // 0.3L*logl(0.3L/0.5L) + 0.7L*logl(0.7L/0.5L)
  CHECK(relative_entropy(p, ProbabilityVector({0.5, 0.5})) ==
        doctest::Approx(0.08228287850505184).epsilon(1e-14));
  CHECK(std::isinf(
      relative_entropy(ProbabilityVector({0.5, 0.5}), ProbabilityVector({1.0, 0.0}))));
  // 0 log 0 = 0: q may charge states p does not
  CHECK(relative_entropy(ProbabilityVector({1.0, 0.0}), ProbabilityVector({0.8, 0.2})) ==
        doctest::Approx(std::log(1.0 / 0.8)));
  CHECK_THROWS(relative_entropy(p, ProbabilityVector::uniform(3)));
}

TEST_CASE("relative entropy nonnegativity property") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const ProbabilityVector p = random_point(rng, d);
    const ProbabilityVector q = random_point(rng, d);
    const double re = relative_entropy(p, q);
    CHECK(re >= 0.0);
    double linf = 0.0;
    for (int i = 0; i < d; ++i) linf = std::max(linf, std::abs(p[i] - q[i]));
    if (linf < 1e-12) CHECK(re == doctest::Approx(0.0).epsilon(1e-12));
    if (re == 0.0) CHECK(linf < 1e-7);
  }
}

TEST_CASE("ell") {
  CHECK(ell(1.0) == 0.0);
  CHECK(ell(0.0) == 1.0);
  CHECK(ell(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(ell(-0.1));
  // strictly convex away from degenerate chords
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double a = unif(rng), b = unif(rng);
    if (std::abs(a - b) < 1e-3) continue;
    CHECK(ell(0.5 * (a + b)) < 0.5 * (ell(a) + ell(b)));
  }
  for (double z : {0.2, 0.5, 0.9, 1.1, 2.0, 7.0}) CHECK(ell(z) > 0.0);
}

TEST_CASE("empirical measure") {
  const std::vector<int> config = {0, 0, 1};
  const LatticeMeasure r = empirical_measure(config, 2);
  CHECK(r.N == 3);
  CHECK(r.counts == std::vector<long long>{2, 1});

  const std::vector<int> constant(17, 2);
  CHECK(empirical_measure(constant, 4).counts == std::vector<long long>{0, 0, 17, 0});

  std::mt19937_64 rng(5);
  std::vector<int> cfg(40);
  for (int& x : cfg) x = static_cast<int>(rng() % 3);
  std::vector<int> shuffled = cfg;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(empirical_measure(cfg, 3).counts == empirical_measure(shuffled, 3).counts);

  CHECK_THROWS(empirical_measure(std::vector<int>{0, 3}, 3));
  CHECK_THROWS(empirical_measure(std::vector<int>{-1}, 3));
}

TEST_CASE("lattice enumeration order and size") {
  const LatticeEnumeration e(2, 2);
  REQUIRE(e.size() == 3);
  CHECK(e.at(0).counts == std::vector<long long>{2, 0});
  CHECK(e.at(1).counts == std::vector<long long>{1, 1});
  CHECK(e.at(2).counts == std::vector<long long>{0, 2});

  CHECK(LatticeEnumeration(4, 3).size() == 15);

  // brute-force enumeration oracle for N=10, d=4
  std::size_t count = 0;
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b)
      for (int c = 0; a + b + c <= 10; ++c) ++count;
  CHECK(count == 286);
  CHECK(LatticeEnumeration(10, 4).size() == 286);
}

TEST_CASE("lattice enumeration is first-coordinate-decreasing and bijective") {
  for (auto [n, d] :
       std::vector<std::pair<long long, int>>{{6, 2}, {5, 3}, {4, 4}, {9, 3}}) {
    const LatticeEnumeration e(n, d);
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(e.index_of(e.counts(i)) == i);
      if (i + 1 < e.size()) {
        auto a = e.counts(i);
        auto b = e.counts(i + 1);
        int pos = 0;
        while (a[pos] == b[pos]) ++pos;
        CHECK(a[pos] > b[pos]);
      }
      long long sum = 0;
      for (long long c : e.counts(i)) sum += c;
      CHECK(sum == n);
    }
  }
  CHECK_THROWS(LatticeEnumeration(5, 2).index_of(std::vector<long long>{4, 2}));
}

TEST_CASE("lattice cap guard") {
  CHECK_THROWS_AS(LatticeEnumeration(400, 4, 50000), std::runtime_error);
  CHECK_NOTHROW(LatticeEnumeration(400, 2, 50000));
}

TEST_CASE("log multiplicity") {
  CHECK(log_multiplicity(LatticeMeasure(9, {9, 0, 0})) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_multiplicity(LatticeMeasure(2, {1, 1})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // exact integer multinomial: 6! / (3! 2! 1!) = 60
  CHECK(log_multiplicity(LatticeMeasure(6, {3, 2, 1})) ==
        doctest::Approx(std::log(60.0)).epsilon(1e-14));

  // independent oracle: long-double sum of integer logs
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const long long n = 100 + static_cast<long long>(rng() % 9900);
    std::vector<long long> counts(3, 0);
    long long rest = n;
    counts[0] = static_cast<long long>(rng() % (rest + 1));
    rest -= counts[0];
    counts[1] = static_cast<long long>(rng() % (rest + 1));
    counts[2] = rest - counts[1];
    auto log_factorial = [](long long m) {
      long double acc = 0.0L;
      for (long long k = 2; k <= m; ++k) acc += logl(static_cast<long double>(k));
      return acc;
    };
    long double oracle = log_factorial(n);
    for (long long c : counts) oracle -= log_factorial(c);
    const double impl = log_multiplicity(LatticeMeasure(n, counts));
    CHECK(std::abs(impl - static_cast<double>(oracle)) <=
          1e-10 * std::max(1.0, std::abs(static_cast<double>(oracle))));
  }
}

TEST_CASE("sanov bounds") {
  {
    const auto [lo, hi] = sanov_bounds(LatticeMeasure(12, {12, 0}));
    CHECK(hi == doctest::Approx(-12.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(lo == doctest::Approx(hi - 2.0 * std::log(13.0)).epsilon(1e-13));
  }
  {
    const auto [lo, hi] = sanov_bounds(LatticeMeasure(12, {4, 4, 4}));
    CHECK(hi == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(lo < hi);
  }
  {
    // bracket against exact log(binom(4,1) / 2^4)
    const auto [lo, hi] = sanov_bounds(LatticeMeasure(4, {3, 1}));
    const double exact = std::log(4.0 / 16.0);
    CHECK(lo <= exact + 1e-12);
    CHECK(exact <= hi + 1e-12);
  }
}

TEST_CASE("sanov sandwich exhaustive") {
  for (int d : {2, 3, 4}) {
    for (long long n = 1; n <= 30; ++n) {
      const LatticeEnumeration e(n, d);
      for (std::size_t i = 0; i < e.size(); ++i) {
        const LatticeMeasure r = e.at(i);
        const auto [lo, hi] = sanov_bounds(r);
        const double mid = log_multiplicity(r) - n * std::log(static_cast<double>(d));
        CHECK(lo <= mid + 1e-10);
        CHECK(mid <= hi + 1e-10);
      }
    }
  }
}

TEST_CASE("multinomial weights sum to one") {
  std::mt19937_64 rng(31);
  for (int d : {2, 3}) {
    for (long long n : {5LL, 17LL, 50LL}) {
      const ProbabilityVector q = random_point(rng, d);
      const LatticeEnumeration e(n, d);
      double total = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const LatticeMeasure r = e.at(i);
        double logw = log_multiplicity(r);
        for (int x = 0; x < d; ++x)
          if (r.counts[x] > 0) logw += r.counts[x] * std::log(q[x]);
        total += std::exp(logw);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("lattice measure basics") {
  CHECK_THROWS(LatticeMeasure(3, {2, 2}));
  CHECK_THROWS(LatticeMeasure(3, {4, -1}));
  const LatticeMeasure r(4, {3, 1});
  const ProbabilityVector p = r.to_probability();
  CHECK(p[0] == doctest::Approx(0.75));
}

TEST_CASE("state space labels") {
  CHECK_THROWS(StateSpace(1));
  CHECK_THROWS(StateSpace(2, {"a", "a"}));
  CHECK_THROWS(StateSpace(2, {"a"}));
  CHECK(StateSpace(3).labels.size() == 3);
}
