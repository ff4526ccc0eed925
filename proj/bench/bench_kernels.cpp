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

// Serial-vs-OpenMP timing of the hot kernels: uniformization sweeps over a
// ~45k-state lattice, entropy reductions, and a replica batch of Gillespie
// runs. Usage: mfre_bench [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "mfre/gibbs.hpp"
#include "mfre/lattice_chain.hpp"
#include "mfre/parallel.hpp"
#include "mfre/simulate.hpp"

using namespace mfre;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - t0)
      .count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4f ms   parallel %9.4f ms   speedup %5.2fx\n", name,
              serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) set_max_threads(std::atoi(argv[1]));
  std::printf("openmp=%s threads=%d\n", openmp_enabled() ? "yes" : "no", max_threads());

  // 3-state Gibbs model, N = 300: 45451 lattice states
  AffinePotential pot;
  pot.V = {0.1, -0.2, 0.3};
  pot.W = Matrix(3, {0.0, 0.5, 1.0, 0.5, 0.0, 0.2, 1.0, 0.2, 0.0});
  pot.beta = 0.7;
  const GibbsModel model = make_gibbs_model(pot, Adjacency::complete(3));
  const long long n = 300;
  const auto t_build = Clock::now();
  const LatticeGenerator gen =
      build_generator(prelimit_rate_family(model, n), n, 100000);
  std::printf("generator: %zu states, built in %.1f ms\n", gen.diag.size(),
              seconds_since(t_build) * 1e3);

  const double lambda = gen.uniformization_lambda();
  const TransitionKernel kernel = gen.uniformized_kernel(lambda);
  Vec v(gen.diag.size(), 1.0 / static_cast<double>(gen.diag.size()));
  Vec out(v.size());

  report("markov kernel sweep x32",
         time_best_of(3,
                      [&] {
                        for (int i = 0; i < 32; ++i) {
                          apply_kernel(kernel, v, out, Exec::serial);
                          std::swap(v, out);
                        }
                      }),
         time_best_of(3, [&] {
           for (int i = 0; i < 32; ++i) {
             apply_kernel(kernel, v, out, Exec::parallel);
             std::swap(v, out);
           }
         }));

  const LatticeDistribution gibbs = gibbs_pushforward(gen.lattice, model);
  const ProbabilityVector q({0.25, 0.45, 0.3});
  report("scaled entropy reduction",
         time_best_of(3, [&] { (void)scaled_product_entropy(q, gibbs, Exec::serial); }),
         time_best_of(3, [&] { (void)scaled_product_entropy(q, gibbs, Exec::parallel); }));

  const RateFamily fam = prelimit_rate_family(model, 1000);
  const LatticeMeasure init(1000, {400, 350, 250});
  auto replica_batch = [&](Exec exec) {
    parallel_for(
        64,
        [&](std::size_t s) {
          SimulateOptions opt;
          opt.keep_events = false;
          opt.stream = s;
          (void)simulate_empirical(fam, 1000, init, 1.0, 7, opt);
        },
        exec);
  };
  report("gillespie replicas x64",
         time_best_of(3, [&] { replica_batch(Exec::serial); }),
         time_best_of(3, [&] { replica_batch(Exec::parallel); }));
  return 0;
}
