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

#ifndef MFRE_SIMULATE_HPP
#define MFRE_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mfre/dynamics.hpp"
#include "mfre/simplex.hpp"

// Exact-event (Gillespie direct method) simulation of the N-particle system
// and its empirical-measure chain.
//
// Randomness contract: xoshiro256** 1.0; per-replica streams are derived
// with SplitMix64 from (seed, stream_index). Exponential holding times and
// categorical jump picks are inverse-CDF on uniforms in the open unit
// interval, so event logs are bit-identical for identical (seed, inputs)
// on any platform.

namespace mfre {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
  Rng(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next();
  double uniform01();  // open interval (0, 1)
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

 private:
  std::uint64_t s_[4];
};

struct JumpEvent {
  double time;
  int from;
  int to;
};

struct SimulationRun {
  std::uint64_t seed = 0;
  long long N = 0;
  double horizon = 0.0;
  std::vector<JumpEvent> events;
  bool events_suppressed = false;  // log dropped past max_events
  std::vector<std::pair<double, LatticeMeasure>> snapshots;
  LatticeMeasure final_state{1, {1, 0}};
  bool absorbed = false;  // total rate hit zero before the horizon
  double absorbed_at = 0.0;
  std::size_t event_count = 0;
};

struct SimulateOptions {
  std::vector<double> snapshot_times;  // sorted ascending
  bool keep_events = true;
  std::size_t max_events = 10'000'000;  // stop storing (not simulating) past this
  std::uint64_t stream = 0;             // replica stream index for (seed, stream)
};

// Empirical-measure chain: jump r -> r + (e_y - e_x)/N at rate
// c_x * Gamma^N_xy(r), exponential holding times, proportional jump choice.
// O(d^2) work per event.
SimulationRun simulate_empirical(const RateFamily& family_at_N, long long N,
                                 const LatticeMeasure& init, double horizon,
                                 std::uint64_t seed,
                                 const SimulateOptions& options = {});

struct TaggedRun {
  SimulationRun empirical;
  // per tagged particle: (time, new state), first entry at time 0 holds the
  // initial state
  std::vector<std::vector<std::pair<double, int>>> tagged_paths;
};

// Configuration-level simulation retaining particle identities; the first k
// particles' trajectories are recorded. Initial states are iid from
// init_law. The empirical marginal has the same law as simulate_empirical
// (not the same paths; the equality is distributional).
TaggedRun simulate_tagged(const RateFamily& family_at_N, long long N, int k,
                          const ProbabilityVector& init_law, double horizon,
                          std::uint64_t seed, const SimulateOptions& options = {});

// sup over snapshots of the l1 distance to the interpolated trajectory
double lln_gap(const SimulationRun& run, const Trajectory& ode);

}  // namespace mfre

#endif  // MFRE_SIMULATE_HPP
