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

#include "mfre/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace mfre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

StateSpace::StateSpace(int d_) : d(d_) {
  if (d < 2) throw std::invalid_argument("StateSpace: d must be >= 2");
  labels.reserve(d);
  for (int x = 0; x < d; ++x) labels.push_back("s" + std::to_string(x + 1));
}

StateSpace::StateSpace(int d_, std::vector<std::string> labels_)
    : d(d_), labels(std::move(labels_)) {
  if (d < 2) throw std::invalid_argument("StateSpace: d must be >= 2");
  if (static_cast<int>(labels.size()) != d)
    throw std::invalid_argument("StateSpace: need exactly d labels");
  std::set<std::string> uniq(labels.begin(), labels.end());
  if (static_cast<int>(uniq.size()) != d)
    throw std::invalid_argument("StateSpace: labels must be distinct");
}

ProbabilityVector::ProbabilityVector(Vec weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("ProbabilityVector: empty");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0))  // catches negatives and NaN
      throw std::invalid_argument("ProbabilityVector: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("ProbabilityVector: entries sum to " +
                                std::to_string(sum) + ", not 1");
}

ProbabilityVector ProbabilityVector::uniform(int d) {
  if (d < 1) throw std::invalid_argument("uniform: d must be positive");
  return ProbabilityVector(Vec(d, 1.0 / d), Unchecked{});
}

ProbabilityVector ProbabilityVector::vertex(int d, int x) {
  if (x < 0 || x >= d) throw std::invalid_argument("vertex: state out of range");
  Vec w(d, 0.0);
  w[x] = 1.0;
  return ProbabilityVector(std::move(w), Unchecked{});
}

ProbabilityVector ProbabilityVector::renormalized(Vec weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0))
      throw std::invalid_argument("renormalized: negative or NaN entry");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("renormalized: zero mass");
  for (double& v : weights) v /= sum;
  return ProbabilityVector(std::move(weights), Unchecked{});
}

bool ProbabilityVector::interior(double eps) const {
  for (double v : w_)
    if (v <= eps) return false;
  return true;
}

LatticeMeasure::LatticeMeasure(long long N_, std::vector<long long> counts_)
    : N(N_), counts(std::move(counts_)) {
  if (N < 1) throw std::invalid_argument("LatticeMeasure: N must be >= 1");
  long long sum = 0;
  for (long long c : counts) {
    if (c < 0) throw std::invalid_argument("LatticeMeasure: negative count");
    sum += c;
  }
  if (sum != N) throw std::invalid_argument("LatticeMeasure: counts must sum to N");
}

ProbabilityVector LatticeMeasure::to_probability() const {
  Vec w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(N);
  return ProbabilityVector::renormalized(std::move(w));
}

double LatticeEnumeration::log_size(long long N, int d) {
  return std::lgamma(static_cast<double>(N + d)) -
         std::lgamma(static_cast<double>(N + 1)) - std::lgamma(static_cast<double>(d));
}

LatticeEnumeration::LatticeEnumeration(long long N, int d, std::size_t cap)
    : N_(N), d_(d) {
  if (N < 1) throw std::invalid_argument("LatticeEnumeration: N must be >= 1");
  if (d < 2) throw std::invalid_argument("LatticeEnumeration: d must be >= 2");
  if (log_size(N, d) > std::log(static_cast<double>(cap)) + 1e-9)
    throw std::runtime_error(
        "LatticeEnumeration: lattice would have ~exp(" +
        std::to_string(log_size(N, d)) + ") points, above the cap of " +
        std::to_string(cap) + "; raise the cap to proceed");

  // comp(n, k) = number of compositions of n into k nonnegative parts.
  // Every value needed below is at most the full lattice size <= cap.
  comp_table_.assign(static_cast<std::size_t>(N + 1) * (d + 1), 0);
  for (long long n = 0; n <= N; ++n) {
    comp_table_[static_cast<std::size_t>(n) * (d + 1) + 1] = 1;
    for (int k = 2; k <= d; ++k) {
      std::uint64_t acc = 0;
      // comp(n,k) = sum_{v=0..n} comp(n-v, k-1), computed as running sum
      if (n == 0) {
        acc = 1;
      } else {
        acc = comp_table_[static_cast<std::size_t>(n - 1) * (d + 1) + k] +
              comp_table_[static_cast<std::size_t>(n) * (d + 1) + (k - 1)];
      }
      comp_table_[static_cast<std::size_t>(n) * (d + 1) + k] = acc;
    }
  }

  size_ = static_cast<std::size_t>(comp(N, d));
  flat_.reserve(size_ * d);
  std::vector<long long> c(d, 0);
  c[0] = N;
  while (true) {
    flat_.insert(flat_.end(), c.begin(), c.end());
    // successor in first-coordinate-decreasing order: decrement the
    // rightmost positive entry before the last and pile the freed tail mass
    // directly after it. Positions between that entry and the last are zero
    // by choice of j, so the tail mass is c[d-1] + 1.
    int j = d - 2;
    while (j >= 0 && c[j] == 0) --j;
    if (j < 0) break;
    --c[j];
    const long long tail = c[d - 1] + 1;
    c[d - 1] = 0;
    c[j + 1] = tail;
  }
  if (flat_.size() != size_ * static_cast<std::size_t>(d))
    throw std::logic_error("LatticeEnumeration: enumeration size mismatch");
}

std::uint64_t LatticeEnumeration::comp(long long n, int k) const {
  return comp_table_[static_cast<std::size_t>(n) * (d_ + 1) + k];
}

std::span<const long long> LatticeEnumeration::counts(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("LatticeEnumeration: index");
  return {flat_.data() + index * d_, static_cast<std::size_t>(d_)};
}

LatticeMeasure LatticeEnumeration::at(std::size_t index) const {
  auto c = counts(index);
  return LatticeMeasure(N_, std::vector<long long>(c.begin(), c.end()));
}

std::size_t LatticeEnumeration::index_of(std::span<const long long> c) const {
  if (static_cast<int>(c.size()) != d_)
    throw std::invalid_argument("index_of: dimension mismatch");
  long long remaining = N_;
  std::uint64_t rank = 0;
  for (int pos = 0; pos < d_ - 1; ++pos) {
    const long long v = c[pos];
    if (v < 0 || v > remaining) throw std::invalid_argument("index_of: not a lattice point");
    // entries larger than v at this position come first; their count
    // telescopes to a single composition number.
    if (v < remaining) rank += comp(remaining - v - 1, d_ - pos);
    remaining -= v;
  }
  if (c[d_ - 1] != remaining) throw std::invalid_argument("index_of: counts do not sum to N");
  return static_cast<std::size_t>(rank);
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  double sum = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;  // 0 log 0 = 0
    if (q[x] == 0.0) return kInf;
    sum += p[x] * std::log(p[x] / q[x]);
  }
  return std::max(sum, 0.0);
}

double relative_entropy(const ProbabilityVector& p, const ProbabilityVector& q) {
  return relative_entropy(p.span(), q.span());
}

double ell(double z) {
  if (z < 0.0) throw std::invalid_argument("ell: negative argument");
  if (z == 0.0) return 1.0;
  return z * std::log(z) - z + 1.0;
}

LatticeMeasure empirical_measure(std::span<const int> config, int d) {
  if (config.empty()) throw std::invalid_argument("empirical_measure: empty configuration");
  std::vector<long long> counts(d, 0);
  for (int x : config) {
    if (x < 0 || x >= d)
      throw std::invalid_argument("empirical_measure: state index out of range");
    ++counts[x];
  }
  return LatticeMeasure(static_cast<long long>(config.size()), std::move(counts));
}

double log_multiplicity(const LatticeMeasure& r) {
  double v = std::lgamma(static_cast<double>(r.N + 1));
  for (long long c : r.counts) v -= std::lgamma(static_cast<double>(c + 1));
  return v;
}

SanovBounds sanov_bounds(const LatticeMeasure& r) {
  const int d = r.dim();
  const double n = static_cast<double>(r.N);
  const ProbabilityVector hat = r.to_probability();
  const double re = relative_entropy(hat, ProbabilityVector::uniform(d));
  const double upper = -n * re;
  const double lower = upper - d * std::log(n + 1.0);
  return {lower, upper};
}

}  // namespace mfre
