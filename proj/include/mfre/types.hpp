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

#ifndef MFRE_TYPES_HPP
#define MFRE_TYPES_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfre {

using Vec = std::vector<double>;

// Small dense square matrix, row-major. Used for d x d rate matrices and
// Jacobians with d rarely above 10; no BLAS needed at these sizes.
struct Matrix {
  int n = 0;
  Vec a;

  Matrix() = default;
  explicit Matrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
  Matrix(int n_, Vec entries) : n(n_), a(std::move(entries)) {
    if (a.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("Matrix: entry count does not match dimension");
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  std::span<const double> row(int i) const {
    return {a.data() + static_cast<std::size_t>(i) * n, static_cast<std::size_t>(n)};
  }
};

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

inline double l1_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

}  // namespace mfre

#endif  // MFRE_TYPES_HPP
