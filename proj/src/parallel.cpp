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

#include "mfre/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfre {

namespace {
int g_max_threads = 0;  // 0 = library default
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  if (g_max_threads > 0) return g_max_threads;
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int n) {
  g_max_threads = std::max(1, n);
#ifdef _OPENMP
  omp_set_num_threads(g_max_threads);
#endif
}

void apply_kernel(const TransitionKernel& k, std::span<const double> in,
                  std::span<double> out, Exec exec) {
  if (in.size() != k.n || out.size() != k.n)
    throw std::invalid_argument("apply_kernel: vector size does not match kernel");
  const auto n = static_cast<std::ptrdiff_t>(k.n);
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      double acc = k.self_w[j] * in[j];
      for (std::size_t e = k.in_ptr[j]; e < k.in_ptr[j + 1]; ++e)
        acc += k.in_w[e] * in[k.in_src[e]];
      out[j] = acc;
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double acc = k.self_w[j] * in[j];
    for (std::size_t e = k.in_ptr[j]; e < k.in_ptr[j + 1]; ++e)
      acc += k.in_w[e] * in[k.in_src[e]];
    out[j] = acc;
  }
}

namespace {

constexpr std::size_t kBlock = 4096;

template <class BlockFn>
double blocked_reduce(std::size_t n, Exec exec, BlockFn block_fn) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return block_fn(0, n);
  Vec partial(nblocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(nblocks);
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      partial[b] = block_fn(lo, std::min(lo + kBlock, n));
    }
  } else
#else
  (void)exec;
#endif
  {
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      partial[b] = block_fn(lo, std::min(lo + kBlock, n));
    }
  }
  double total = 0.0;
  for (double v : partial) total += v;  // fixed block order
  return total;
}

}  // namespace

double blocked_sum(std::span<const double> a, Exec exec) {
  return blocked_reduce(a.size(), exec, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i];
    return s;
  });
}

double blocked_dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  if (a.size() != b.size()) throw std::invalid_argument("blocked_dot: size mismatch");
  return blocked_reduce(a.size(), exec, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  Exec exec) {
  std::exception_ptr first_error = nullptr;
  const auto n = static_cast<std::ptrdiff_t>(count);
#ifdef _OPENMP
  if (exec == Exec::parallel) {
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(mfre_parallel_for_error)
        {
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace mfre
