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

#include "mfre/lattice_chain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mfre/csv.hpp"

namespace mfre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double LatticeGenerator::uniformization_lambda() const {
  double lam = 0.0;
  for (double v : diag) lam = std::max(lam, -v);
  return lam;
}

TransitionKernel LatticeGenerator::uniformized_kernel(double lambda) const {
  const std::size_t n = diag.size();
  TransitionKernel k;
  k.n = n;
  k.self_w.resize(n);
  for (std::size_t i = 0; i < n; ++i) k.self_w[i] = 1.0 + diag[i] / lambda;
  // transpose the CSR off-diagonals into in-edge lists
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t e = 0; e < col.size(); ++e) ++indeg[col[e]];
  k.in_ptr.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) k.in_ptr[j + 1] = k.in_ptr[j] + indeg[j];
  k.in_src.resize(col.size());
  k.in_w.resize(col.size());
  std::vector<std::size_t> cursor(k.in_ptr.begin(), k.in_ptr.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      const std::size_t j = col[e];
      k.in_src[cursor[j]] = i;
      k.in_w[cursor[j]] = rate[e] / lambda;
      ++cursor[j];
    }
  }
  return k;
}

LatticeGenerator build_generator(const RateFamily& family_at_N, long long N,
                                 std::size_t cap) {
  if (N < 1) throw std::invalid_argument("build_generator: N must be >= 1");
  const int d = family_at_N.d;
  auto lattice = std::make_shared<const LatticeEnumeration>(N, d, cap);

  LatticeGenerator gen;
  gen.N = N;
  gen.d = d;
  gen.lattice = lattice;
  const std::size_t n = lattice->size();
  gen.row_ptr.assign(n + 1, 0);
  gen.diag.assign(n, 0.0);

  Matrix G(d);
  Vec r(d);
  std::vector<long long> target(d);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = lattice->counts(i);
    for (int x = 0; x < d; ++x)
      r[x] = static_cast<double>(c[x]) / static_cast<double>(N);
    family_at_N.rates_into(r, G);
    double outflow = 0.0;
    for (int x = 0; x < d; ++x) {
      if (c[x] == 0) continue;
      for (int y = 0; y < d; ++y) {
        if (y == x) continue;
        const double gxy = G.at(x, y);
        if (gxy < 0.0)
          throw std::invalid_argument("build_generator: negative off-diagonal rate");
        if (gxy == 0.0) continue;
        const double jump_rate = static_cast<double>(c[x]) * gxy;  // N r_x Gamma_xy
        std::copy(c.begin(), c.end(), target.begin());
        --target[x];
        ++target[y];
        gen.col.push_back(lattice->index_of(target));
        gen.rate.push_back(jump_rate);
        outflow += jump_rate;
      }
    }
    gen.row_ptr[i + 1] = gen.col.size();
    gen.diag[i] = -outflow;
  }
  return gen;
}

LatticeDistribution::LatticeDistribution(LatticePtr lattice_, Vec weights_)
    : lattice(std::move(lattice_)), weights(std::move(weights_)) {
  if (!lattice) throw std::invalid_argument("LatticeDistribution: null lattice");
  if (weights.size() != lattice->size())
    throw std::invalid_argument("LatticeDistribution: weight count mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("LatticeDistribution: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument("LatticeDistribution: weights sum to " +
                                std::to_string(sum));
}

LatticeDistribution multinomial_pushforward(LatticePtr lattice,
                                            const ProbabilityVector& rho) {
  const int d = lattice->dim();
  if (rho.dim() != d)
    throw std::invalid_argument("multinomial_pushforward: dimension mismatch");
  const long long N = lattice->particles();
  Vec logp(d);
  for (int x = 0; x < d; ++x) logp[x] = rho[x] > 0.0 ? std::log(rho[x]) : -kInf;
  Vec w(lattice->size(), 0.0);
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    auto c = lattice->counts(i);
    double lg = std::lgamma(static_cast<double>(N + 1));
    bool zero = false;
    for (int x = 0; x < d; ++x) {
      if (c[x] == 0) continue;
      if (rho[x] == 0.0) {
        zero = true;
        break;
      }
      lg += static_cast<double>(c[x]) * logp[x] - std::lgamma(static_cast<double>(c[x] + 1));
    }
    w[i] = zero ? 0.0 : std::exp(lg);
  }
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return LatticeDistribution(std::move(lattice), std::move(w));
}

LatticeDistribution gibbs_pushforward(LatticePtr lattice, const GibbsModel& model) {
  const int d = lattice->dim();
  if (model.dim() != d)
    throw std::invalid_argument("gibbs_pushforward: dimension mismatch");
  const long long N = lattice->particles();
  Vec logw(lattice->size());
  double m = -kInf;
  Vec r(d);
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    auto c = lattice->counts(i);
    for (int x = 0; x < d; ++x)
      r[x] = static_cast<double>(c[x]) / static_cast<double>(N);
    logw[i] = log_multiplicity(lattice->at(i)) -
              static_cast<double>(N) * mean_energy_phi(model, r);
    m = std::max(m, logw[i]);
  }
  Vec w(lattice->size());
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    w[i] = std::exp(logw[i] - m);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return LatticeDistribution(std::move(lattice), std::move(w));
}

LatticeDistribution point_mass_nearest(LatticePtr lattice,
                                       const ProbabilityVector& target) {
  const int d = lattice->dim();
  if (target.dim() != d)
    throw std::invalid_argument("point_mass_nearest: dimension mismatch");
  const long long N = lattice->particles();
  std::size_t best = 0;
  double best_dist = kInf;
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    auto c = lattice->counts(i);
    double dist = 0.0;
    for (int x = 0; x < d; ++x)
      dist += std::abs(static_cast<double>(c[x]) / static_cast<double>(N) - target[x]);
    if (dist < best_dist - 1e-15) {
      best_dist = dist;
      best = i;
    }
  }
  Vec w(lattice->size(), 0.0);
  w[best] = 1.0;
  return LatticeDistribution(std::move(lattice), std::move(w));
}

double log_partition_lattice(LatticePtr lattice, const GibbsModel& model) {
  const int d = lattice->dim();
  const long long N = lattice->particles();
  double m = -kInf;
  Vec logw(lattice->size());
  Vec r(d);
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    auto c = lattice->counts(i);
    for (int x = 0; x < d; ++x)
      r[x] = static_cast<double>(c[x]) / static_cast<double>(N);
    logw[i] = log_multiplicity(lattice->at(i)) -
              static_cast<double>(N) * mean_energy_phi(model, r);
    m = std::max(m, logw[i]);
  }
  double sum = 0.0;
  for (double v : logw) sum += std::exp(v - m);
  return m + std::log(sum);
}

TransientResult transient_distribution(const LatticeGenerator& gen,
                                       const LatticeDistribution& init, double t,
                                       double tol, Exec exec) {
  if (!(t >= 0.0)) throw std::invalid_argument("transient_distribution: t must be >= 0");
  if (!(tol > 0.0) || tol > 1e-6)
    throw std::invalid_argument("transient_distribution: tol must be in (0, 1e-6]");
  if (init.lattice.get() != gen.lattice.get() || init.size() != gen.diag.size())
    throw std::invalid_argument("transient_distribution: init does not match generator");

  if (t == 0.0) return {init, false, 0};
  const double lambda = gen.uniformization_lambda();
  if (lambda == 0.0) return {init, true, 0};

  const TransitionKernel kernel = gen.uniformized_kernel(lambda);
  const double mu = lambda * t;
  const std::size_t n = init.size();

  Vec acc(n, 0.0), v = init.weights, next(n);
  // log Poisson(mu) weights, accumulated until mass 1 - tol is covered
  double cum = 0.0;
  int k = 0;
  const int k_max = static_cast<int>(mu + 12.0 * std::sqrt(mu + 1.0) + 60.0);
  for (; k <= k_max; ++k) {
    const double logw = -mu + k * std::log(mu) - std::lgamma(static_cast<double>(k + 1));
    const double w = std::exp(logw);
    if (w > 0.0) {
      for (std::size_t i = 0; i < n; ++i) acc[i] += w * v[i];
      cum += w;
    }
    if (cum >= 1.0 - tol) {
      ++k;
      break;
    }
    apply_kernel(kernel, v, next, exec);
    std::swap(v, next);
  }
  double sum = 0.0;
  for (double a : acc) sum += a;
  for (double& a : acc) a /= sum;
  return {LatticeDistribution(init.lattice, std::move(acc)), false, k};
}

namespace {

// strong connectivity of the sparse pattern: BFS along edges and reversed
// edges must both reach every state
bool strongly_connected(const LatticeGenerator& gen) {
  const std::size_t n = gen.diag.size();
  if (n <= 1) return true;
  auto bfs = [&](bool forward) {
    std::vector<std::vector<std::size_t>> radj;
    if (!forward) {
      radj.assign(n, {});
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
          if (gen.rate[e] > 0.0) radj[gen.col[e]].push_back(i);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      if (forward) {
        for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
          if (gen.rate[e] > 0.0 && !seen[gen.col[e]]) {
            seen[gen.col[e]] = true;
            ++visited;
            stack.push_back(gen.col[e]);
          }
        }
      } else {
        for (std::size_t j : radj[i]) {
          if (!seen[j]) {
            seen[j] = true;
            ++visited;
            stack.push_back(j);
          }
        }
      }
    }
    return visited == n;
  };
  return bfs(true) && bfs(false);
}

// birth-death pattern: every edge connects enumeration neighbors
bool is_birth_death(const LatticeGenerator& gen) {
  for (std::size_t i = 0; i < gen.diag.size(); ++i)
    for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
      const std::size_t j = gen.col[e];
      if (j + 1 != i && i + 1 != j) return false;
    }
  return true;
}

double edge_rate(const LatticeGenerator& gen, std::size_t i, std::size_t j) {
  double r = 0.0;
  for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
    if (gen.col[e] == j) r += gen.rate[e];
  return r;
}

LatticeDistribution stationary_birth_death(const LatticeGenerator& gen) {
  const std::size_t n = gen.diag.size();
  Vec logw(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double up = edge_rate(gen, i, i + 1);
    const double down = edge_rate(gen, i + 1, i);
    if (up <= 0.0 || down <= 0.0)
      throw std::invalid_argument("stationary_distribution: chain is reducible");
    logw[i + 1] = logw[i] + std::log(up) - std::log(down);
  }
  const double m = *std::max_element(logw.begin(), logw.end());
  Vec w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(logw[i] - m);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return LatticeDistribution(gen.lattice, std::move(w));
}

// GTH elimination on the uniformized stochastic matrix; subtraction-free,
// so small stationary weights come out with full relative accuracy.
LatticeDistribution stationary_gth(const LatticeGenerator& gen) {
  const std::size_t n = gen.diag.size();
  constexpr std::size_t kDenseLimit = 4000;
  if (n > kDenseLimit)
    throw std::runtime_error(
        "stationary_distribution: dense elimination limited to " +
        std::to_string(kDenseLimit) + " states; this chain has " + std::to_string(n));

  const double lambda = gen.uniformization_lambda();
  std::vector<Vec> P(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    P[i][i] = 1.0 + gen.diag[i] / lambda;
    for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
      P[i][gen.col[e]] += gen.rate[e] / lambda;
  }

  Vec s(n, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) {
    double sk = 0.0;
    for (std::size_t j = 0; j < k; ++j) sk += P[k][j];
    s[k] = sk;
    if (sk <= 0.0)
      throw std::invalid_argument("stationary_distribution: chain is reducible");
    for (std::size_t i = 0; i < k; ++i) {
      const double pik = P[i][k];
      if (pik == 0.0) continue;
      const double f = pik / sk;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) P[i][j] += f * P[k][j];
    }
  }
  Vec u(n, 0.0);
  u[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += u[i] * P[i][k];
    u[k] = acc / s[k];
    total += u[k];
  }
  for (double& v : u) v /= total;
  return LatticeDistribution(gen.lattice, std::move(u));
}

}  // namespace

LatticeDistribution stationary_distribution(const LatticeGenerator& gen) {
  if (!strongly_connected(gen))
    throw std::invalid_argument("stationary_distribution: chain is reducible");
  if (is_birth_death(gen)) return stationary_birth_death(gen);
  return stationary_gth(gen);
}

double stationary_residual(const LatticeGenerator& gen, const LatticeDistribution& pi) {
  const std::size_t n = gen.diag.size();
  Vec acc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] += pi.weights[i] * gen.diag[i];
    for (std::size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
      acc[gen.col[e]] += pi.weights[i] * gen.rate[e];
  }
  double res = 0.0;
  for (double v : acc) res = std::max(res, std::abs(v));
  return res;
}

double scaled_product_entropy(const ProbabilityVector& q, const LatticeDistribution& m,
                              Exec exec) {
  const LatticeEnumeration& lattice = *m.lattice;
  const int d = lattice.dim();
  if (q.dim() != d)
    throw std::invalid_argument("scaled_product_entropy: dimension mismatch");
  const long long N = lattice.particles();
  const double n = static_cast<double>(N);

  double q_entropy = 0.0;  // sum q log q
  Vec logq(d);
  for (int x = 0; x < d; ++x) {
    logq[x] = q[x] > 0.0 ? std::log(q[x]) : -kInf;
    if (q[x] > 0.0) q_entropy += q[x] * logq[x];
  }

  const std::size_t count = lattice.size();
  Vec terms(count, 0.0);
  std::atomic<bool> infinite{false};
  // weight_r * theta_r per lattice point; theta = (1/N) log(m_r / C_r)
  parallel_for(
      count,
      [&](std::size_t i) {
        auto c = lattice.counts(i);
        double log_mult = std::lgamma(n + 1.0);
        double log_w = 0.0;
        bool zero = false;
        for (int x = 0; x < d; ++x) {
          if (c[x] == 0) continue;
          if (q[x] == 0.0) {
            zero = true;
            break;
          }
          log_mult -= std::lgamma(static_cast<double>(c[x] + 1));
          log_w += static_cast<double>(c[x]) * logq[x];
        }
        if (zero) return;  // multinomial weight is 0
        log_w += log_mult;
        const double w = std::exp(log_w);
        if (w == 0.0) return;
        if (m.weights[i] <= 0.0) {
          infinite.store(true, std::memory_order_relaxed);
          return;
        }
        const double theta = (std::log(m.weights[i]) - log_mult) / n;
        terms[i] = w * theta;
      },
      exec);
  if (infinite.load()) return kInf;
  const double expectation = blocked_sum(terms, exec);
  return q_entropy - expectation;
}

Vec entropy_curve(const LatticeGenerator& gen, const ProbabilityVector& q,
                  const LatticeDistribution& init, std::span<const double> times,
                  double tol, Exec exec) {
  for (std::size_t k = 1; k < times.size(); ++k)
    if (times[k] < times[k - 1])
      throw std::invalid_argument("entropy_curve: times must be nondecreasing");
  const double step_tol =
      std::min(1e-8, tol / std::max<std::size_t>(std::size_t{1}, times.size()));
  Vec values;
  values.reserve(times.size());
  LatticeDistribution current = init;
  double t_now = 0.0;
  for (double t : times) {
    if (t > t_now) {
      current = transient_distribution(gen, current, t - t_now, step_tol, exec).dist;
      t_now = t;
    }
    values.push_back(scaled_product_entropy(q, current, exec));
  }
  return values;
}

void write_lattice_csv(std::ostream& os, const LatticeDistribution& dist) {
  const LatticeEnumeration& lattice = *dist.lattice;
  const int d = lattice.dim();
  os << "# lattice distribution, N=" << lattice.particles() << ", d=" << d << "\r\n";
  os << "# columns count_1..count_" << d
     << ": state counts of the lattice point; column weight: probability mass"
     << "\r\n";
  for (int x = 0; x < d; ++x) os << "count_" << (x + 1) << ",";
  os << "weight\r\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    auto c = lattice.counts(i);
    for (int x = 0; x < d; ++x) os << c[x] << ",";
    os << csv::real(dist.weights[i]) << "\r\n";
  }
}

LatticeDistribution read_lattice_csv(std::istream& is, std::size_t cap) {
  std::string line;
  std::vector<std::vector<long long>> counts;
  Vec weights;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("count_1", 0) == 0) continue;  // header row
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw std::runtime_error("lattice csv: malformed row");
    std::vector<long long> c;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) c.push_back(std::stoll(cells[i]));
    counts.push_back(std::move(c));
    weights.push_back(std::stod(cells.back()));
  }
  if (counts.empty()) throw std::runtime_error("lattice csv: no data rows");
  const int d = static_cast<int>(counts.front().size());
  long long N = 0;
  for (long long v : counts.front()) N += v;
  auto lattice = std::make_shared<const LatticeEnumeration>(N, d, cap);
  Vec w(lattice->size(), 0.0);
  for (std::size_t row = 0; row < counts.size(); ++row) {
    if (static_cast<int>(counts[row].size()) != d)
      throw std::runtime_error("lattice csv: inconsistent column count");
    w[lattice->index_of(counts[row])] = weights[row];
  }
  return LatticeDistribution(std::move(lattice), std::move(w));
}

}  // namespace mfre
