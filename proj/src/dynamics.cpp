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

#include "mfre/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfre {

Matrix RateFamily::rates(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != d)
    throw std::invalid_argument("RateFamily: dimension mismatch");
  Matrix G(d);
  rates_into(p, G);
  return G;
}

RateFamily RateFamily::constant(Matrix G) {
  validate_rate_matrix(G);
  RateFamily fam;
  fam.d = G.n;
  fam.rates_into = [G](std::span<const double>, Matrix& out) { out = G; };
  return fam;
}

void validate_rate_matrix(const Matrix& G, double tol) {
  for (int x = 0; x < G.n; ++x) {
    double row = 0.0;
    for (int y = 0; y < G.n; ++y) {
      if (x != y && G.at(x, y) < -tol)
        throw std::invalid_argument("rate matrix: negative off-diagonal entry");
      row += G.at(x, y);
    }
    if (std::abs(row) > tol)
      throw std::invalid_argument("rate matrix: row sum " + std::to_string(row) +
                                  " exceeds tolerance");
  }
}

Vec Trajectory::at(double t) const {
  if (times.empty()) throw std::invalid_argument("Trajectory::at: empty trajectory");
  if (t <= times.front()) return points.front().weights();
  if (t >= times.back()) return points.back().weights();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  Vec out(points[lo].dim());
  for (int i = 0; i < points[lo].dim(); ++i)
    out[i] = (1.0 - w) * points[lo][i] + w * points[hi][i];
  return out;
}

Vec drift_unchecked(const RateFamily& family, std::span<const double> p, Matrix& G) {
  family.rates_into(p, G);
  const int d = family.d;
  Vec out(d, 0.0);
  for (int z = 0; z < d; ++z) {
    double acc = 0.0;
    for (int x = 0; x < d; ++x) acc += p[x] * G.at(x, z);
    out[z] = acc;
  }
  return out;
}

Vec drift(const RateFamily& family, const ProbabilityVector& p) {
  Matrix G = family.rates(p.span());
  validate_rate_matrix(G);
  Vec out(family.d, 0.0);
  for (int z = 0; z < family.d; ++z) {
    double acc = 0.0;
    for (int x = 0; x < family.d; ++x) acc += p[x] * G.at(x, z);
    out[z] = acc;
  }
  return out;
}

namespace {

// Clamp tiny negatives, renormalize, abort on real simplex escape.
ProbabilityVector to_simplex_guarded(Vec w) {
  for (double& v : w) {
    if (v < -1e-9)
      throw std::runtime_error("solve_forward: trajectory left the simplex (" +
                               std::to_string(v) + "); reduce the step size");
    if (v < 0.0) v = 0.0;
  }
  return ProbabilityVector::renormalized(std::move(w));
}

}  // namespace

Trajectory solve_forward(const RateFamily& family, const ProbabilityVector& p0,
                         double horizon, double step) {
  if (!(horizon > 0.0)) throw std::invalid_argument("solve_forward: horizon must be > 0");
  if (!(step > 0.0) || step > horizon)
    throw std::invalid_argument("solve_forward: need 0 < step <= horizon");
  {
    Matrix G = family.rates(p0.span());
    validate_rate_matrix(G);
  }

  const int d = family.d;
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(p0);

  Matrix scratch(d);
  Vec y = p0.weights();
  double t = 0.0;
  Vec stage(d), k1, k2, k3, k4;
  while (t < horizon - 1e-15) {
    const double h = std::min(step, horizon - t);
    k1 = drift_unchecked(family, y, scratch);
    for (int i = 0; i < d; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    k2 = drift_unchecked(family, stage, scratch);
    for (int i = 0; i < d; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    k3 = drift_unchecked(family, stage, scratch);
    for (int i = 0; i < d; ++i) stage[i] = y[i] + h * k3[i];
    k4 = drift_unchecked(family, stage, scratch);
    for (int i = 0; i < d; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
    ProbabilityVector point = to_simplex_guarded(y);
    y = point.weights();
    traj.times.push_back(t);
    traj.points.push_back(std::move(point));
  }
  return traj;
}

double entropy_descent_rate(const ProbabilityVector& p, const ProbabilityVector& q,
                            const Matrix& G) {
  const int d = p.dim();
  if (q.dim() != d || G.n != d)
    throw std::invalid_argument("entropy_descent_rate: dimension mismatch");
  if (!p.interior() || !q.interior())
    throw std::invalid_argument("entropy_descent_rate: p and q must be interior points");
  validate_rate_matrix(G);
  double sum = 0.0;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      if (x == y) continue;
      const double ratio = (p[y] * q[x]) / (p[x] * q[y]);
      sum += ell(ratio) * p[x] * (q[y] / q[x]) * G.at(y, x);
    }
  }
  return -sum;
}

Matrix drift_jacobian(const RateFamily& family, std::span<const double> p, double h) {
  const int d = family.d;
  Matrix J(d);
  Matrix scratch(d);
  Vec shifted(p.begin(), p.end());
  for (int j = 0; j < d; ++j) {
    shifted[j] = p[j] + h;
    Vec up = drift_unchecked(family, shifted, scratch);
    shifted[j] = p[j] - h;
    Vec down = drift_unchecked(family, shifted, scratch);
    shifted[j] = p[j];
    for (int i = 0; i < d; ++i) J.at(i, j) = (up[i] - down[i]) / (2.0 * h);
  }
  return J;
}

namespace {

// Newton step J delta = -drift restricted to the tangent of the simplex:
// the last component equation is redundant (drift components sum to zero),
// so it is replaced by the constraint sum(delta) = 0. Gaussian elimination
// with partial pivoting.
bool solve_tangent_step(const Matrix& J, const Vec& minus_drift, Vec& delta) {
  const int d = J.n;
  Matrix A(d);
  Vec b(d, 0.0);
  for (int z = 0; z < d - 1; ++z) {
    for (int i = 0; i < d; ++i) A.at(z, i) = J.at(z, i);
    b[z] = minus_drift[z];
  }
  for (int i = 0; i < d; ++i) A.at(d - 1, i) = 1.0;
  b[d - 1] = 0.0;

  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    double best = std::abs(A.at(col, col));
    for (int r = col + 1; r < d; ++r) {
      if (std::abs(A.at(r, col)) > best) {
        best = std::abs(A.at(r, col));
        piv = r;
      }
    }
    if (best < 1e-14) return false;
    if (piv != col) {
      for (int c = 0; c < d; ++c) std::swap(A.at(piv, c), A.at(col, c));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < d; ++r) {
      const double f = A.at(r, col) / A.at(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < d; ++c) A.at(r, c) -= f * A.at(col, c);
      b[r] -= f * b[col];
    }
  }
  delta.assign(d, 0.0);
  for (int r = d - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < d; ++c) acc -= A.at(r, c) * delta[c];
    delta[r] = acc / A.at(r, r);
  }
  return true;
}

Vec clamp_to_simplex(Vec w) {
  double sum = 0.0;
  for (double& v : w) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) return Vec(w.size(), 1.0 / static_cast<double>(w.size()));
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

FixedPointSearch find_fixed_points(const RateFamily& family, int grid_resolution,
                                   double tol) {
  if (grid_resolution < 2)
    throw std::invalid_argument("find_fixed_points: grid_resolution must be >= 2");
  const int d = family.d;
  FixedPointSearch result;

  LatticeEnumeration seeds(grid_resolution, d,
                           std::max<std::size_t>(LatticeEnumeration::kDefaultCap,
                                                 1u << 20));
  Matrix scratch(d);
  std::vector<Vec> found;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    auto c = seeds.counts(s);
    Vec p(d);
    for (int i = 0; i < d; ++i)
      p[i] = static_cast<double>(c[i]) / static_cast<double>(grid_resolution);

    bool converged = false;
    Vec f = drift_unchecked(family, p, scratch);
    double res = l1_norm(f);
    for (int iter = 0; iter < 200; ++iter) {
      if (res < tol) {
        converged = true;
        break;
      }
      Matrix J = drift_jacobian(family, p);
      Vec minus_drift(d);
      for (int i = 0; i < d; ++i) minus_drift[i] = -f[i];
      Vec delta;
      if (!solve_tangent_step(J, minus_drift, delta)) break;
      // Backtracking on the residual keeps the iteration damped.
      double lambda = 1.0;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        Vec cand(d);
        for (int i = 0; i < d; ++i) cand[i] = p[i] + lambda * delta[i];
        cand = clamp_to_simplex(std::move(cand));
        Vec fc = drift_unchecked(family, cand, scratch);
        const double rc = l1_norm(fc);
        if (rc < res * (1.0 - 1e-4 * lambda) || rc < tol) {
          p = std::move(cand);
          f = std::move(fc);
          res = rc;
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
    }
    if (res < tol) converged = true;
    if (converged) {
      found.push_back(p);
    } else {
      result.all_starts_converged = false;
    }
  }

  std::sort(found.begin(), found.end());
  std::vector<Vec> reps;
  for (const auto& p : found) {
    bool dup = false;
    for (const auto& r : reps) {
      if (l1_distance(p, r) < 10.0 * tol) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(p);
  }
  for (auto& r : reps)
    result.points.push_back(ProbabilityVector::renormalized(std::move(r)));
  return result;
}

}  // namespace mfre
