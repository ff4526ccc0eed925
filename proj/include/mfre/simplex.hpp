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

#ifndef MFRE_SIMPLEX_HPP
#define MFRE_SIMPLEX_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mfre/types.hpp"

// Finite-state-space combinatorics: probability vectors on the simplex,
// integer lattice measures (empirical measures of N particles), relative
// entropy, multinomial log-multiplicities and the combinatorial bounds that
// sandwich the probability of an empirical-measure class under the uniform
// product law. Everything here is a pure function; log-gamma keeps all
// multiplicities in the log domain (the raw counts overflow near N = 200).

namespace mfre {

struct StateSpace {
  int d;
  std::vector<std::string> labels;

  explicit StateSpace(int d_);
  StateSpace(int d_, std::vector<std::string> labels_);
};

// A point of the probability simplex; entries >= 0 and summing to 1 within
// 1e-12. Inputs are never renormalized silently, use `renormalized` when an
// almost-normalized vector needs the nudge.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbabilityVector(Vec weights);
  static ProbabilityVector uniform(int d);
  static ProbabilityVector vertex(int d, int x);
  static ProbabilityVector renormalized(Vec weights);

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const Vec& weights() const { return w_; }
  std::span<const double> span() const { return {w_.data(), w_.size()}; }
  bool interior(double eps = 0.0) const;

 private:
  struct Unchecked {};
  ProbabilityVector(Vec w, Unchecked) : w_(std::move(w)) {}
  Vec w_;
};

// Integer counts per state summing to N; the state of the empirical-measure
// chain, i.e. a point of the simplex lattice with spacing 1/N.
struct LatticeMeasure {
  long long N;
  std::vector<long long> counts;

  LatticeMeasure(long long N_, std::vector<long long> counts_);
  int dim() const { return static_cast<int>(counts.size()); }
  ProbabilityVector to_probability() const;
};

// All counts vectors of a given (N, d), ordered with the first coordinate
// decreasing, i.e. (N,0,...,0) first and (0,...,0,N) last. The enumeration
// is immutable and shareable between threads, and ranks are computed
// combinatorially so index_of is O(N + d) without a hash map.
class LatticeEnumeration {
 public:
  static constexpr std::size_t kDefaultCap = 50000;

  LatticeEnumeration(long long N, int d, std::size_t cap = kDefaultCap);

  long long particles() const { return N_; }
  int dim() const { return d_; }
  std::size_t size() const { return size_; }
  std::span<const long long> counts(std::size_t index) const;
  LatticeMeasure at(std::size_t index) const;
  std::size_t index_of(std::span<const long long> counts) const;

  // log of binom(N+d-1, d-1) without building anything; used for cap
  // diagnostics before construction.
  static double log_size(long long N, int d);

 private:
  long long N_;
  int d_;
  std::size_t size_;
  std::vector<long long> flat_;                // size_ * d_
  std::vector<std::uint64_t> comp_table_;      // compositions(n, k), n<=N, k<=d
  std::uint64_t comp(long long n, int k) const;
};

using LatticePtr = std::shared_ptr<const LatticeEnumeration>;

// R(p||q) = sum_x p_x log(p_x / q_x), with 0 log 0 = 0; +infinity exactly
// when p charges a state that q does not.
double relative_entropy(const ProbabilityVector& p, const ProbabilityVector& q);
double relative_entropy(std::span<const double> p, std::span<const double> q);

// ell(z) = z log z - z + 1, the convex integrand of the entropy-descent
// identity; ell(0) = 1, ell(z) = 0 iff z = 1.
double ell(double z);

LatticeMeasure empirical_measure(std::span<const int> config, int d);

// log of N! / prod_x counts_x!
double log_multiplicity(const LatticeMeasure& r);

struct SanovBounds {
  double lower;
  double upper;
};

// Log-domain bounds on the probability that N uniform iid samples have
// empirical measure r: upper = -N R(r/N || uniform), lower = upper -
// d log(N+1). The bracketed quantity is log_multiplicity(r) - N log d.
SanovBounds sanov_bounds(const LatticeMeasure& r);

}  // namespace mfre

#endif  // MFRE_SIMPLEX_HPP
