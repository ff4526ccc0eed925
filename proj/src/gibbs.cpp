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

#include "mfre/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mfre {

void GibbsPotential::validate(int sample_points, double tol) const {
  if (d < 2) throw std::invalid_argument("GibbsPotential: d must be >= 2");
  if (!value || !gradient) throw std::invalid_argument("GibbsPotential: missing callables");
  const double h = 1e-5;
  Vec g(d);
  // deterministic low-discrepancy-ish interior samples
  for (int s = 0; s < sample_points; ++s) {
    Vec p(d);
    double sum = 0.0;
    for (int i = 0; i < d; ++i) {
      p[i] = 0.5 + 0.5 * std::sin(1.7 * (s + 1) + 2.3 * (i + 1));
      sum += p[i];
    }
    for (int i = 0; i < d; ++i) p[i] /= sum;
    for (int z = 0; z < d; ++z) {
      gradient(z, p, g);
      for (int x = 0; x < d; ++x) {
        Vec q(p);
        q[x] = p[x] + h;
        const double up = value(z, q);
        q[x] = p[x] - h;
        const double down = value(z, q);
        const double fd = (up - down) / (2.0 * h);
        if (std::abs(fd - g[x]) > tol)
          throw std::invalid_argument(
              "GibbsPotential: gradient disagrees with finite differences (err " +
              std::to_string(std::abs(fd - g[x])) + ")");
      }
    }
  }
}

GibbsPotential AffinePotential::to_potential() const {
  const int d = dim();
  if (W.n != d) throw std::invalid_argument("AffinePotential: V/W dimension mismatch");
  AffinePotential self = *this;
  GibbsPotential pot;
  pot.d = d;
  pot.value = [self](int x, std::span<const double> p) {
    double acc = self.V[x];
    for (int y = 0; y < self.W.n; ++y) acc += self.beta * self.W.at(x, y) * p[y];
    return acc;
  };
  pot.gradient = [self](int z, std::span<const double>, std::span<double> out) {
    for (int x = 0; x < self.W.n; ++x) out[x] = self.beta * self.W.at(z, x);
  };
  return pot;
}

GibbsPotential QuadraticPotential::to_potential() const {
  const int d = dim();
  if (W.n != d || S.n != d)
    throw std::invalid_argument("QuadraticPotential: dimension mismatch");
  QuadraticPotential self = *this;
  GibbsPotential pot;
  pot.d = d;
  pot.value = [self](int x, std::span<const double> p) {
    double lin = 0.0, inner = 0.0;
    for (int y = 0; y < self.W.n; ++y) {
      lin += self.W.at(x, y) * p[y];
      inner += self.S.at(x, y) * p[y];
    }
    return self.V[x] + self.beta * lin + 0.5 * self.kappa * inner * inner;
  };
  pot.gradient = [self](int z, std::span<const double> p, std::span<double> out) {
    double inner = 0.0;
    for (int y = 0; y < self.S.n; ++y) inner += self.S.at(z, y) * p[y];
    for (int x = 0; x < self.W.n; ++x)
      out[x] = self.beta * self.W.at(z, x) + self.kappa * inner * self.S.at(z, x);
  };
  return pot;
}

Adjacency::Adjacency(Matrix alpha_) : alpha(std::move(alpha_)) {
  const int d = alpha.n;
  if (d < 2) throw std::invalid_argument("Adjacency: d must be >= 2");
  for (int x = 0; x < d; ++x) {
    if (alpha.at(x, x) != 0.0)
      throw std::invalid_argument("Adjacency: diagonal must be zero");
    for (int y = 0; y < d; ++y) {
      const double v = alpha.at(x, y);
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("Adjacency: entries must be 0 or 1");
      if (v != alpha.at(y, x))
        throw std::invalid_argument("Adjacency: matrix must be symmetric");
    }
  }
  // connectivity by breadth-first search
  std::vector<bool> seen(d, false);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  int visited = 1;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop();
    for (int y = 0; y < d; ++y) {
      if (alpha.at(x, y) == 1.0 && !seen[y]) {
        seen[y] = true;
        ++visited;
        queue.push(y);
      }
    }
  }
  if (visited != d) throw std::invalid_argument("Adjacency: graph is not connected");
}

Adjacency Adjacency::complete(int d) {
  Matrix a(d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) a.at(x, y) = (x == y) ? 0.0 : 1.0;
  return Adjacency(std::move(a));
}

const char* to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::metropolis: return "metropolis";
    case DynamicsKind::heat_bath: return "heat_bath";
    case DynamicsKind::symmetrized: return "symmetrized";
  }
  return "unknown";
}

DynamicsKind dynamics_kind_from_string(const std::string& name) {
  if (name == "metropolis") return DynamicsKind::metropolis;
  if (name == "heat_bath") return DynamicsKind::heat_bath;
  if (name == "symmetrized") return DynamicsKind::symmetrized;
  throw std::invalid_argument("unknown dynamics kind: " + name);
}

GibbsModel make_gibbs_model(GibbsPotential pot, Adjacency adj, DynamicsKind kind) {
  if (pot.d != adj.dim())
    throw std::invalid_argument("GibbsModel: potential/adjacency dimension mismatch");
  pot.validate();
  return GibbsModel{std::move(pot), std::move(adj), kind, std::nullopt};
}

GibbsModel make_gibbs_model(AffinePotential pot, Adjacency adj, DynamicsKind kind) {
  GibbsModel model = make_gibbs_model(pot.to_potential(), std::move(adj), kind);
  model.affine = std::move(pot);
  return model;
}

GibbsModel make_gibbs_model(QuadraticPotential pot, Adjacency adj, DynamicsKind kind) {
  return make_gibbs_model(pot.to_potential(), std::move(adj), kind);
}

GibbsModel curie_weiss(double beta, DynamicsKind kind) {
  AffinePotential pot;
  pot.V = {0.0, 0.0};
  pot.W = Matrix(2, {0.0, 1.0, 1.0, 0.0});
  pot.beta = beta;
  return make_gibbs_model(std::move(pot), Adjacency::complete(2), kind);
}

double mean_energy_phi(const GibbsModel& model, std::span<const double> q) {
  double acc = 0.0;
  for (int x = 0; x < model.dim(); ++x)
    if (q[x] != 0.0) acc += model.potential.value(x, q) * q[x];
  return acc;
}

double energy_U(const GibbsModel& model, std::span<const int> config) {
  const LatticeMeasure r = empirical_measure(config, model.dim());
  const ProbabilityVector hat = r.to_probability();
  double acc = 0.0;
  for (int i : config) acc += model.potential.value(i, hat.span());
  return acc;
}

double field_H(const GibbsModel& model, int x, std::span<const double> p) {
  const int d = model.dim();
  double acc = model.potential.value(x, p);
  Vec g(d);
  for (int z = 0; z < d; ++z) {
    if (p[z] == 0.0) continue;
    model.potential.gradient(z, p, g);
    acc += g[x] * p[z];
  }
  return acc;
}

double psi_diff(const GibbsModel& model, int x, int y, std::span<const double> p) {
  if (x == y) throw std::invalid_argument("psi_diff: x and y must differ");
  return field_H(model, y, p) - field_H(model, x, p);
}

double delta_energy(const GibbsModel& model, long long N, int x, int y,
                    std::span<const double> r) {
  if (N < 1) throw std::invalid_argument("delta_energy: N must be >= 1");
  if (x == y) throw std::invalid_argument("delta_energy: x and y must differ");
  if (model.affine) {
    // N [Phi(r + (e_y - e_x)/N) - Phi(r)] expands exactly for affine K.
    const AffinePotential& a = *model.affine;
    double acc = a.V[y] - a.V[x];
    for (int z = 0; z < a.W.n; ++z)
      acc += a.beta * (a.W.at(y, z) - a.W.at(x, z) + a.W.at(z, y) - a.W.at(z, x)) * r[z];
    acc += a.beta / static_cast<double>(N) *
           (a.W.at(y, y) - a.W.at(y, x) - a.W.at(x, y) + a.W.at(x, x));
    return acc;
  }
  Vec shifted(r.begin(), r.end());
  const double step = 1.0 / static_cast<double>(N);
  shifted[y] += step;
  shifted[x] -= step;
  return static_cast<double>(N) *
         (mean_energy_phi(model, shifted) - mean_energy_phi(model, r));
}

double remainder_B(const GibbsModel& model, long long N, int x, int y,
                   std::span<const double> r) {
  return delta_energy(model, N, x, y, r) - psi_diff(model, x, y, r);
}

double dynamics_rate(DynamicsKind kind, double delta) {
  switch (kind) {
    case DynamicsKind::metropolis: return std::exp(-std::max(delta, 0.0));
    case DynamicsKind::heat_bath: return 1.0 / (1.0 + std::exp(delta));
    case DynamicsKind::symmetrized: return 0.5 * (1.0 + std::exp(-delta));
  }
  throw std::logic_error("dynamics_rate: bad kind");
}

namespace {

void fill_rate_matrix(const GibbsModel& model, Matrix& out,
                      const std::function<double(int, int)>& delta_fn) {
  const int d = model.dim();
  for (int x = 0; x < d; ++x) {
    double row = 0.0;
    for (int y = 0; y < d; ++y) {
      if (x == y) continue;
      double rate = 0.0;
      if (model.adjacency.alpha.at(x, y) != 0.0)
        rate = dynamics_rate(model.kind, delta_fn(x, y));
      out.at(x, y) = rate;
      row += rate;
    }
    out.at(x, x) = -row;
  }
}

}  // namespace

RateFamily prelimit_rate_family(const GibbsModel& model, long long N) {
  if (N < 1) throw std::invalid_argument("prelimit_rate_family: N must be >= 1");
  RateFamily fam;
  fam.d = model.dim();
  fam.rates_into = [model, N](std::span<const double> r, Matrix& out) {
    fill_rate_matrix(model, out,
                     [&](int x, int y) { return delta_energy(model, N, x, y, r); });
  };
  return fam;
}

RateFamily limit_rate_family(const GibbsModel& model) {
  RateFamily fam;
  fam.d = model.dim();
  fam.rates_into = [model](std::span<const double> p, Matrix& out) {
    const int d = model.dim();
    // Precompute the field once; psi(x,y) = H[y] - H[x].
    Vec H(d);
    for (int x = 0; x < d; ++x) H[x] = field_H(model, x, p);
    for (int x = 0; x < d; ++x) {
      double row = 0.0;
      for (int y = 0; y < d; ++y) {
        if (x == y) continue;
        double rate = 0.0;
        if (model.adjacency.alpha.at(x, y) != 0.0)
          rate = dynamics_rate(model.kind, H[y] - H[x]);
        out.at(x, y) = rate;
        row += rate;
      }
      out.at(x, x) = -row;
    }
  };
  return fam;
}

ProbabilityVector limit_stationary_pi(const GibbsModel& model,
                                      std::span<const double> p) {
  const int d = model.dim();
  Vec H(d);
  double hmin = std::numeric_limits<double>::infinity();
  for (int x = 0; x < d; ++x) {
    H[x] = field_H(model, x, p);
    hmin = std::min(hmin, H[x]);
  }
  Vec w(d);
  for (int x = 0; x < d; ++x) w[x] = std::exp(-(H[x] - hmin));
  return ProbabilityVector::renormalized(std::move(w));
}

double gibbs_constant_C(const GibbsModel& model, int refinement) {
  if (refinement < 2)
    throw std::invalid_argument("gibbs_constant_C: refinement must be >= 2");
  const int d = model.dim();
  const ProbabilityVector nu = ProbabilityVector::uniform(d);

  auto objective = [&](std::span<const double> q) {
    double ent = 0.0;
    for (int x = 0; x < d; ++x)
      if (q[x] > 0.0) ent += q[x] * std::log(q[x]);
    return ent + std::log(static_cast<double>(d)) + mean_energy_phi(model, q);
  };

  // grid scan
  LatticeEnumeration grid(refinement, d,
                          std::max<std::size_t>(LatticeEnumeration::kDefaultCap, 1u << 21));
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(grid.size());
  Vec q(d);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto c = grid.counts(i);
    for (int x = 0; x < d; ++x)
      q[x] = static_cast<double>(c[x]) / static_cast<double>(refinement);
    scored.emplace_back(objective(q), i);
  }
  std::sort(scored.begin(), scored.end());

  // mirror-descent polish from the best grid cells; multiplicative updates
  // keep iterates strictly interior where the entropy gradient is finite.
  double best = scored.front().first;
  const int starts = std::min<std::size_t>(6, scored.size());
  for (int s = 0; s < starts; ++s) {
    auto c = grid.counts(scored[s].second);
    Vec w(d);
    for (int x = 0; x < d; ++x)
      w[x] = (static_cast<double>(c[x]) + 0.5) / (refinement + 0.5 * d);
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;

    double fw = objective(w);
    double eta = 0.5;
    Vec grad(d), cand(d);
    for (int iter = 0; iter < 5000; ++iter) {
      for (int x = 0; x < d; ++x) grad[x] = std::log(w[x]) + 1.0 + field_H(model, x, w);
      double gmean = 0.0;
      for (double g : grad) gmean += g;
      gmean /= d;
      bool moved = false;
      while (eta > 1e-14) {
        double zsum = 0.0;
        for (int x = 0; x < d; ++x) {
          cand[x] = w[x] * std::exp(-eta * (grad[x] - gmean));
          zsum += cand[x];
        }
        for (int x = 0; x < d; ++x) cand[x] /= zsum;
        const double fc = objective(cand);
        if (fc < fw - 1e-16) {
          const double gain = fw - fc;
          w = cand;
          fw = fc;
          moved = true;
          eta = std::min(eta * 1.3, 2.0);
          if (gain < 1e-10) iter = 5000;  // objective tolerance reached
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
    best = std::min(best, fw);
  }
  return best - std::log(static_cast<double>(d));
}

double lyapunov_F(const GibbsModel& model, const ProbabilityVector& p, double C) {
  double acc = 0.0;
  for (int x = 0; x < model.dim(); ++x) {
    if (p[x] == 0.0) continue;  // 0 log 0 = 0 and the K term is weighted by p_x
    acc += (model.potential.value(x, p.span()) + std::log(p[x])) * p[x];
  }
  return acc - C;
}

double reverse_candidate(const ProbabilityVector& pi_star, const ProbabilityVector& p) {
  return relative_entropy(pi_star, p);
}

}  // namespace mfre
