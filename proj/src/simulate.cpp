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

#include "mfre/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfre {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t state = seed;
  // fold the stream index in through one splitmix scramble
  state ^= splitmix64(stream_index) + 0x9E3779B97F4A7C15ull * (stream_index + 1);
  for (int i = 0; i < 4; ++i) s_[i] = splitmix64(state);
  bool all_zero = true;
  for (std::uint64_t v : s_)
    if (v != 0) all_zero = false;
  if (all_zero) s_[0] = 0x9E3779B97F4A7C15ull;
}

std::uint64_t Rng::next() {
  // xoshiro256** 1.0
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  // 53-bit mantissa mapped to the open interval (0, 1); keeps exponential
  // holding times strictly positive and categorical picks in range
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

struct PairRates {
  // flattened (x,y) pairs in x-major order, excluding x == y
  Vec rates;
  double total = 0.0;
};

void fill_pair_rates(const Matrix& G, std::span<const long long> counts, int d,
                     PairRates& pr) {
  pr.rates.assign(static_cast<std::size_t>(d) * d, 0.0);
  pr.total = 0.0;
  for (int x = 0; x < d; ++x) {
    if (counts[x] == 0) continue;
    for (int y = 0; y < d; ++y) {
      if (y == x) continue;
      const double g = G.at(x, y);
      if (g <= 0.0) continue;
      const double w = static_cast<double>(counts[x]) * g;
      pr.rates[static_cast<std::size_t>(x) * d + y] = w;
      pr.total += w;
    }
  }
}

// proportional pick in fixed x-major order
std::pair<int, int> pick_pair(const PairRates& pr, int d, double u) {
  double target = u * pr.total;
  double acc = 0.0;
  int last_x = 0, last_y = 1;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      if (y == x) continue;
      const double w = pr.rates[static_cast<std::size_t>(x) * d + y];
      if (w <= 0.0) continue;
      acc += w;
      last_x = x;
      last_y = y;
      if (target <= acc) return {x, y};
    }
  }
  return {last_x, last_y};  // guard against roundoff at u ~ 1
}

}  // namespace

SimulationRun simulate_empirical(const RateFamily& family_at_N, long long N,
                                 const LatticeMeasure& init, double horizon,
                                 std::uint64_t seed, const SimulateOptions& options) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_empirical: horizon must be > 0");
  if (init.N != N) throw std::invalid_argument("simulate_empirical: init has wrong N");
  const int d = family_at_N.d;
  if (init.dim() != d) throw std::invalid_argument("simulate_empirical: dimension mismatch");

  SimulationRun run;
  run.seed = seed;
  run.N = N;
  run.horizon = horizon;

  Rng rng(seed, options.stream);
  std::vector<long long> counts = init.counts;
  Vec r(d);
  Matrix G(d);
  PairRates pr;
  double t = 0.0;
  std::size_t snap_idx = 0;

  auto record_snapshots_up_to = [&](double limit) {
    while (snap_idx < options.snapshot_times.size() &&
           options.snapshot_times[snap_idx] <= limit + 1e-15) {
      run.snapshots.emplace_back(options.snapshot_times[snap_idx],
                                 LatticeMeasure(N, counts));
      ++snap_idx;
    }
  };

  while (true) {
    for (int x = 0; x < d; ++x)
      r[x] = static_cast<double>(counts[x]) / static_cast<double>(N);
    family_at_N.rates_into(r, G);
    fill_pair_rates(G, counts, d, pr);
    if (pr.total <= 0.0) {
      run.absorbed = true;
      run.absorbed_at = t;
      record_snapshots_up_to(horizon);
      break;
    }
    const double dt = rng.exponential(pr.total);
    if (t + dt >= horizon) {
      record_snapshots_up_to(horizon);
      break;
    }
    record_snapshots_up_to(t + dt);  // state before the jump
    t += dt;
    const auto [x, y] = pick_pair(pr, d, rng.uniform01());
    --counts[x];
    ++counts[y];
    ++run.event_count;
    if (options.keep_events) {
      if (run.events.size() < options.max_events)
        run.events.push_back({t, x, y});
      else
        run.events_suppressed = true;
    }
  }
  run.final_state = LatticeMeasure(N, counts);
  return run;
}

TaggedRun simulate_tagged(const RateFamily& family_at_N, long long N, int k,
                          const ProbabilityVector& init_law, double horizon,
                          std::uint64_t seed, const SimulateOptions& options) {
  if (k < 0 || k > N) throw std::invalid_argument("simulate_tagged: need 0 <= k <= N");
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_tagged: horizon must be > 0");
  const int d = family_at_N.d;
  if (init_law.dim() != d) throw std::invalid_argument("simulate_tagged: dimension mismatch");

  Rng rng(seed, options.stream);

  // iid initial configuration by inverse CDF
  std::vector<int> state(static_cast<std::size_t>(N));
  Vec cdf(d);
  double acc = 0.0;
  for (int x = 0; x < d; ++x) {
    acc += init_law[x];
    cdf[x] = acc;
  }
  cdf[d - 1] = 1.0;
  std::vector<long long> counts(d, 0);
  for (long long i = 0; i < N; ++i) {
    const double u = rng.uniform01();
    int x = 0;
    while (cdf[x] < u) ++x;
    state[i] = x;
    ++counts[x];
  }

  // members[x] lists particle ids in state x; position[i] locates particle i
  std::vector<std::vector<long long>> members(d);
  std::vector<std::size_t> position(static_cast<std::size_t>(N));
  for (long long i = 0; i < N; ++i) {
    position[i] = members[state[i]].size();
    members[state[i]].push_back(i);
  }

  TaggedRun out;
  out.tagged_paths.assign(k, {});
  for (int i = 0; i < k; ++i) out.tagged_paths[i].emplace_back(0.0, state[i]);

  SimulationRun& run = out.empirical;
  run.seed = seed;
  run.N = N;
  run.horizon = horizon;

  Vec r(d);
  Matrix G(d);
  PairRates pr;
  double t = 0.0;
  std::size_t snap_idx = 0;
  auto record_snapshots_up_to = [&](double limit) {
    while (snap_idx < options.snapshot_times.size() &&
           options.snapshot_times[snap_idx] <= limit + 1e-15) {
      run.snapshots.emplace_back(options.snapshot_times[snap_idx],
                                 LatticeMeasure(N, counts));
      ++snap_idx;
    }
  };

  while (true) {
    for (int x = 0; x < d; ++x)
      r[x] = static_cast<double>(counts[x]) / static_cast<double>(N);
    family_at_N.rates_into(r, G);
    fill_pair_rates(G, counts, d, pr);
    if (pr.total <= 0.0) {
      run.absorbed = true;
      run.absorbed_at = t;
      record_snapshots_up_to(horizon);
      break;
    }
    const double dt = rng.exponential(pr.total);
    if (t + dt >= horizon) {
      record_snapshots_up_to(horizon);
      break;
    }
    record_snapshots_up_to(t + dt);
    t += dt;
    const auto [x, y] = pick_pair(pr, d, rng.uniform01());
    // uniform particle among those in state x
    const std::size_t nx = members[x].size();
    std::size_t pick = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(nx));
    if (pick >= nx) pick = nx - 1;
    const long long particle = members[x][pick];
    // swap-remove from members[x], append to members[y]
    members[x][pick] = members[x].back();
    position[members[x][pick]] = pick;
    members[x].pop_back();
    position[particle] = members[y].size();
    members[y].push_back(particle);
    state[particle] = y;
    --counts[x];
    ++counts[y];
    ++run.event_count;
    if (options.keep_events) {
      if (run.events.size() < options.max_events)
        run.events.push_back({t, x, y});
      else
        run.events_suppressed = true;
    }
    if (particle < k) out.tagged_paths[particle].emplace_back(t, y);
  }
  run.final_state = LatticeMeasure(N, counts);
  return out;
}

double lln_gap(const SimulationRun& run, const Trajectory& ode) {
  if (run.snapshots.empty())
    throw std::invalid_argument("lln_gap: run has no snapshots");
  if (ode.times.back() < run.snapshots.back().first - 1e-9)
    throw std::invalid_argument("lln_gap: trajectory horizon too short");
  double gap = 0.0;
  for (const auto& [t, lm] : run.snapshots) {
    const Vec target = ode.at(t);
    const ProbabilityVector mu = lm.to_probability();
    gap = std::max(gap, l1_distance(mu.span(), target));
  }
  return gap;
}

}  // namespace mfre
