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

#ifndef MFRE_PARALLEL_HPP
#define MFRE_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mfre/types.hpp"

// OpenMP-parallel kernels for the hot loops (uniformization sweeps, lattice
// reductions, replica batches), each with a serial reference path that the
// tests compare against and that builds without OpenMP.
//
// Determinism contract: for fixed inputs the parallel paths return the same
// bytes as the serial ones regardless of thread count. Gather-style kernels
// get this for free (one writer per output); reductions go through a fixed
// block decomposition whose partial sums are combined in block order.

namespace mfre {

bool openmp_enabled();
int max_threads();
void set_max_threads(int n);  // clamped to >= 1

enum class Exec { serial, parallel };

// Row-stochastic kernel stored by in-edges so that out[j] is a gather.
// Built from a uniformized generator: P = I + L/lambda.
struct TransitionKernel {
  std::size_t n = 0;
  std::vector<std::size_t> in_ptr;  // size n+1
  std::vector<std::size_t> in_src;
  Vec in_w;
  Vec self_w;  // diagonal of P
};

// out = v P (left action on a row vector).
void apply_kernel(const TransitionKernel& k, std::span<const double> in,
                  std::span<double> out, Exec exec);

// Blocked reductions; result is independent of thread count.
double blocked_sum(std::span<const double> a, Exec exec);
double blocked_dot(std::span<const double> a, std::span<const double> b, Exec exec);

// Runs body(i) for i in [0, count). Exceptions are captured and the first
// one is rethrown after the loop completes.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  Exec exec);

}  // namespace mfre

#endif  // MFRE_PARALLEL_HPP
