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

#include "mfre/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfre/simulate.hpp"

namespace mfre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DualVector DualVector::canonical(Vec alpha) {
  double mean = 0.0;
  for (double a : alpha) mean += a;
  mean /= static_cast<double>(alpha.size());
  for (double& a : alpha) a -= mean;
  return DualVector{std::move(alpha)};
}

double hamiltonian(const RateFamily& family, std::span<const double> p,
                   std::span<const double> alpha) {
  const int d = family.d;
  if (static_cast<int>(p.size()) != d || static_cast<int>(alpha.size()) != d)
    throw std::invalid_argument("hamiltonian: dimension mismatch");
  Matrix G = family.rates(p);
  double acc = 0.0;
  for (int x = 0; x < d; ++x) {
    if (p[x] == 0.0) continue;
    for (int y = 0; y < d; ++y) {
      if (y == x) continue;
      const double g = G.at(x, y);
      if (g == 0.0) continue;
      acc += p[x] * g * std::expm1(alpha[y] - alpha[x]);
    }
  }
  return acc;
}

namespace {

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_dense(Matrix A, Vec b, Vec& x) {
  const int n = A.n;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(A.at(col, col));
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A.at(r, col)) > best) {
        best = std::abs(A.at(r, col));
        piv = r;
      }
    if (best < 1e-300) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A.at(piv, c), A.at(col, c));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = A.at(r, col) / A.at(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A.at(r, c) -= f * A.at(col, c);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A.at(r, c) * x[c];
    x[r] = acc / A.at(r, r);
  }
  return true;
}

struct DualState {
  double value = 0.0;  // <alpha, zeta> - H
  Vec grad;            // zeta - dH/dalpha (full d components)
  Matrix hess;         // d2H/dalpha2 (positive semidefinite)
};

void eval_dual(const Matrix& G, std::span<const double> p, std::span<const double> zeta,
               const Vec& alpha, DualState& st, bool with_hess) {
  const int d = G.n;
  st.grad.assign(d, 0.0);
  if (with_hess) st.hess = Matrix(d);
  double H = 0.0, inner = 0.0;
  for (int z = 0; z < d; ++z) {
    inner += alpha[z] * zeta[z];
    st.grad[z] = zeta[z];
  }
  for (int x = 0; x < d; ++x) {
    if (p[x] == 0.0) continue;
    for (int y = 0; y < d; ++y) {
      if (y == x) continue;
      const double g = G.at(x, y);
      if (g == 0.0) continue;
      const double w = p[x] * g * std::exp(alpha[y] - alpha[x]);
      H += w - p[x] * g;
      // dH/dalpha_y += w ; dH/dalpha_x -= w
      st.grad[y] -= w;
      st.grad[x] += w;
      if (with_hess) {
        st.hess.at(y, y) += w;
        st.hess.at(x, x) += w;
        st.hess.at(x, y) -= w;
        st.hess.at(y, x) -= w;
      }
    }
  }
  st.value = inner - H;
}

}  // namespace

LagrangianResult local_lagrangian(const RateFamily& family, std::span<const double> p,
                                  std::span<const double> zeta, double grad_tol,
                                  double alpha_bound) {
  const int d = family.d;
  if (static_cast<int>(p.size()) != d || static_cast<int>(zeta.size()) != d)
    throw std::invalid_argument("local_lagrangian: dimension mismatch");
  double zsum = 0.0;
  for (double z : zeta) zsum += z;
  if (std::abs(zsum) > 1e-10)
    throw std::invalid_argument("local_lagrangian: zeta must be tangent (sum zero)");

  const Matrix G = family.rates(p);
  LagrangianResult res;

  // maximize over alpha with the last coordinate pinned to zero
  Vec alpha(d, 0.0);
  DualState st;
  eval_dual(G, p, zeta, alpha, st, true);
  int iter = 0;
  const int max_iter = 200;
  for (; iter < max_iter; ++iter) {
    double gmax = 0.0;
    for (int z = 0; z < d - 1; ++z) gmax = std::max(gmax, std::abs(st.grad[z]));
    // the pinned chart makes the d-th gradient component redundant
    if (gmax < grad_tol) break;

    // reduced Newton system: hess[0..d-2] step = grad[0..d-2], Levenberg
    // damped when near-singular
    Vec step;
    bool solved = false;
    double mu = 0.0;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
      Matrix A(d - 1);
      Vec b(d - 1);
      for (int i = 0; i < d - 1; ++i) {
        for (int j = 0; j < d - 1; ++j) A.at(i, j) = st.hess.at(i, j);
        A.at(i, i) += mu;
        b[i] = st.grad[i];
      }
      solved = solve_dense(std::move(A), std::move(b), step);
      if (!solved) mu = (mu == 0.0) ? 1e-10 : mu * 100.0;
    }
    if (!solved) {
      res.finite = false;
      break;
    }

    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vec cand(alpha);
      for (int z = 0; z < d - 1; ++z) cand[z] = alpha[z] + lambda * step[z];
      DualState cst;
      eval_dual(G, p, zeta, cand, cst, true);
      if (std::isfinite(cst.value) && cst.value > st.value + 1e-18) {
        alpha = std::move(cand);
        st = std::move(cst);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;  // stalled at numerical optimum

    double amax = 0.0;
    for (int z = 0; z < d - 1; ++z) amax = std::max(amax, std::abs(alpha[z]));
    if (amax > alpha_bound) {
      res.finite = false;
      break;
    }
  }
  res.iterations = iter;
  if (!res.finite) {
    res.value = kInf;
    res.alpha_star.clear();
    return res;
  }
  res.value = std::max(st.value, 0.0);  // Legendre transform of H with H(.,0)=0
  res.alpha_star = DualVector::canonical(alpha).alpha;
  return res;
}

InitialCost InitialCost::indicator(ProbabilityVector at) {
  InitialCost j0;
  j0.kind = Kind::indicator;
  j0.point = std::move(at);
  return j0;
}

InitialCost InitialCost::relative_entropy_to(ProbabilityVector rho) {
  InitialCost j0;
  j0.kind = Kind::function;
  const Vec r = rho.weights();
  j0.value = [r](std::span<const double> p) {
    double acc = 0.0;
    for (std::size_t x = 0; x < r.size(); ++x) {
      if (p[x] == 0.0) continue;
      if (r[x] == 0.0) return kInf;
      acc += p[x] * std::log(p[x] / r[x]);
    }
    return std::max(acc, 0.0);
  };
  j0.grad = [r](std::span<const double> p) {
    Vec g(r.size(), 0.0);
    for (std::size_t x = 0; x < r.size(); ++x)
      g[x] = std::log(std::max(p[x], 1e-300) / r[x]) + 1.0;
    return g;
  };
  j0.point = std::move(rho);  // minimizer; used as the default start guess
  return j0;
}

InitialCost InitialCost::custom(std::function<double(std::span<const double>)> value,
                                std::function<Vec(std::span<const double>)> grad) {
  InitialCost j0;
  j0.kind = Kind::function;
  j0.value = std::move(value);
  j0.grad = std::move(grad);
  return j0;
}

namespace {

// dH/dp holding alpha fixed; rate-matrix sensitivity by central differences
Vec hamiltonian_dp(const RateFamily& family, std::span<const double> p,
                   const Vec& alpha, const Matrix& G_at_p) {
  const int d = family.d;
  Vec out(d, 0.0);
  // explicit p_x factor
  for (int z = 0; z < d; ++z) {
    double acc = 0.0;
    for (int y = 0; y < d; ++y) {
      if (y == z) continue;
      const double g = G_at_p.at(z, y);
      if (g != 0.0) acc += g * std::expm1(alpha[y] - alpha[z]);
    }
    out[z] = acc;
  }
  // rate-matrix dependence
  const double h = 1e-6;
  Vec shifted(p.begin(), p.end());
  Matrix up(d), down(d);
  for (int z = 0; z < d; ++z) {
    shifted[z] = p[z] + h;
    family.rates_into(shifted, up);
    shifted[z] = p[z] - h;
    family.rates_into(shifted, down);
    shifted[z] = p[z];
    double acc = 0.0;
    for (int x = 0; x < d; ++x) {
      if (p[x] == 0.0) continue;
      for (int y = 0; y < d; ++y) {
        if (y == x) continue;
        const double dg = (up.at(x, y) - down.at(x, y)) / (2.0 * h);
        if (dg != 0.0) acc += p[x] * dg * std::expm1(alpha[y] - alpha[x]);
      }
    }
    out[z] += acc;
  }
  return out;
}

struct PathProblem {
  const RateFamily* family;
  const InitialCost* j0;
  Vec q;              // fixed endpoint
  Vec start;          // fixed start (indicator case)
  bool start_free;
  int d;
  int intervals;      // M
  double dt;

  int free_nodes() const { return intervals - 1 + (start_free ? 1 : 0); }
  int dof() const { return free_nodes() * d; }

  // unpack softmax coordinates into the full node list
  void decode(std::span<const double> u, std::vector<Vec>& phi) const {
    const int M = intervals;
    phi.assign(M + 1, Vec(d));
    int slot = 0;
    for (int k = 0; k <= M; ++k) {
      if (k == M) {
        phi[k] = q;
      } else if (k == 0 && !start_free) {
        phi[k] = start;
      } else {
        const double* uk = u.data() + static_cast<std::size_t>(slot) * d;
        double mx = uk[0];
        for (int i = 1; i < d; ++i) mx = std::max(mx, uk[i]);
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
          phi[k][i] = std::exp(uk[i] - mx);
          sum += phi[k][i];
        }
        for (int i = 0; i < d; ++i) phi[k][i] /= sum;
        ++slot;
      }
    }
  }

  // action value and gradient in u; returns +inf value when any interval
  // cost diverges (gradient invalid then)
  double eval(std::span<const double> u, Vec* grad_u) const {
    const int M = intervals;
    std::vector<Vec> phi;
    decode(u, phi);

    std::vector<Vec> grad_phi;
    if (grad_u) grad_phi.assign(M + 1, Vec(d, 0.0));

    double action = 0.0;
    if (start_free) {
      const double v0 = j0->value(phi[0]);
      if (!std::isfinite(v0)) return kInf;
      action += v0;
      if (grad_u) {
        Vec g0;
        if (j0->grad) {
          g0 = j0->grad(phi[0]);
        } else {
          g0.assign(d, 0.0);
          const double h = 1e-7;
          Vec s(phi[0]);
          for (int i = 0; i < d; ++i) {
            s[i] = phi[0][i] + h;
            const double a = j0->value(s);
            s[i] = phi[0][i] - h;
            const double b = j0->value(s);
            s[i] = phi[0][i];
            g0[i] = (a - b) / (2.0 * h);
          }
        }
        for (int i = 0; i < d; ++i) grad_phi[0][i] += g0[i];
      }
    }

    // two-point Gauss quadrature along each interval (velocity is the
    // forward difference); a single midpoint undershoots the segment
    // integral enough to break monotonicity under grid refinement
    static constexpr double kGauss[2] = {0.5 - 0.28867513459481287,
                                         0.5 + 0.28867513459481287};
    Vec node(d), zeta(d);
    for (int k = 0; k < M; ++k) {
      for (int i = 0; i < d; ++i) zeta[i] = (phi[k + 1][i] - phi[k][i]) / dt;
      // enforce exact tangency against rounding
      double zs = 0.0;
      for (double z : zeta) zs += z;
      zeta[d - 1] -= zs;
      for (double s : kGauss) {
        for (int i = 0; i < d; ++i)
          node[i] = (1.0 - s) * phi[k][i] + s * phi[k + 1][i];
        LagrangianResult lr = local_lagrangian(*family, node, zeta);
        if (!lr.finite) return kInf;
        action += 0.5 * dt * lr.value;
        if (grad_u) {
          const Matrix G = family->rates(node);
          const Vec hp = hamiltonian_dp(*family, node, lr.alpha_star, G);
          // dL/dp = -dH/dp at the maximizer; dL/dzeta = alpha*
          for (int i = 0; i < d; ++i) {
            const double lp = -hp[i];
            grad_phi[k][i] += 0.5 * dt * (1.0 - s) * lp - 0.5 * lr.alpha_star[i];
            grad_phi[k + 1][i] += 0.5 * dt * s * lp + 0.5 * lr.alpha_star[i];
          }
        }
      }
    }

    if (grad_u) {
      grad_u->assign(dof(), 0.0);
      int slot = 0;
      for (int k = 0; k < M; ++k) {
        if (k == 0 && !start_free) continue;
        // softmax chain: du_j = phi_j (g_j - <phi, g>)
        double inner = 0.0;
        for (int i = 0; i < d; ++i) inner += phi[k][i] * grad_phi[k][i];
        for (int i = 0; i < d; ++i)
          (*grad_u)[static_cast<std::size_t>(slot) * d + i] =
              phi[k][i] * (grad_phi[k][i] - inner);
        ++slot;
      }
    }
    return action;
  }
};

// L-BFGS with Armijo backtracking; objective may return +inf.
struct LbfgsOutcome {
  double value = kInf;
  Vec u;
  bool converged = false;
};

LbfgsOutcome lbfgs_minimize(const PathProblem& prob, Vec u0, int max_iter = 500,
                            double gtol = 1e-9) {
  const int n = prob.dof();
  LbfgsOutcome out;
  Vec u = std::move(u0);
  Vec grad(n);
  double f = prob.eval(u, &grad);
  if (!std::isfinite(f)) {
    out.u = std::move(u);
    return out;
  }

  const int mem = 8;
  std::vector<Vec> s_hist, y_hist;
  Vec rho_hist;

  for (int iter = 0; iter < max_iter; ++iter) {
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax < gtol) {
      out.converged = true;
      break;
    }

    // two-loop recursion
    Vec dir(grad);
    const int h = static_cast<int>(s_hist.size());
    Vec a(h);
    for (int i = h - 1; i >= 0; --i) {
      double si_q = 0.0;
      for (int j = 0; j < n; ++j) si_q += s_hist[i][j] * dir[j];
      a[i] = rho_hist[i] * si_q;
      for (int j = 0; j < n; ++j) dir[j] -= a[i] * y_hist[i][j];
    }
    if (h > 0) {
      double yy = 0.0, sy = 0.0;
      for (int j = 0; j < n; ++j) {
        yy += y_hist[h - 1][j] * y_hist[h - 1][j];
        sy += s_hist[h - 1][j] * y_hist[h - 1][j];
      }
      const double scale = (yy > 0.0) ? sy / yy : 1.0;
      for (double& v : dir) v *= scale;
    }
    for (int i = 0; i < h; ++i) {
      double yi_r = 0.0;
      for (int j = 0; j < n; ++j) yi_r += y_hist[i][j] * dir[j];
      const double b = rho_hist[i] * yi_r;
      for (int j = 0; j < n; ++j) dir[j] += (a[i] - b) * s_hist[i][j];
    }
    // dir approximates H^-1 grad; descend along -dir
    double dir_dot_grad = 0.0;
    for (int j = 0; j < n; ++j) dir_dot_grad += dir[j] * grad[j];
    if (dir_dot_grad <= 0.0) {
      dir = grad;  // fall back to steepest descent
      dir_dot_grad = 0.0;
      for (int j = 0; j < n; ++j) dir_dot_grad += grad[j] * grad[j];
    }

    double step = 1.0;
    Vec u_new(n), grad_new(n);
    double f_new = kInf;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (int j = 0; j < n; ++j) u_new[j] = u[j] - step * dir[j];
      f_new = prob.eval(u_new, &grad_new);
      if (std::isfinite(f_new) && f_new <= f - 1e-4 * step * dir_dot_grad) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Vec s(n), y(n);
    double sy = 0.0;
    for (int j = 0; j < n; ++j) {
      s[j] = u_new[j] - u[j];
      y[j] = grad_new[j] - grad[j];
      sy += s[j] * y[j];
    }
    if (sy > 1e-12) {
      if (static_cast<int>(s_hist.size()) == mem) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    const double improvement = f - f_new;
    u = std::move(u_new);
    grad = grad_new;
    f = f_new;
    if (improvement < 1e-14 * std::max(1.0, std::abs(f))) {
      out.converged = true;
      break;
    }
  }
  out.value = f;
  out.u = std::move(u);
  return out;
}

Vec softmax_coords(const Vec& p) {
  Vec u(p.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    u[i] = std::log(std::max(p[i], 1e-12));
    mean += u[i];
  }
  mean /= static_cast<double>(p.size());
  for (double& v : u) v -= mean;
  return u;
}

Vec interp_path(const PathVariable& path, double t) {
  const Vec& times = path.times;
  if (t <= times.front()) return path.points.front().weights();
  if (t >= times.back()) return path.points.back().weights();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  Vec out(path.points[lo].dim());
  for (int i = 0; i < path.points[lo].dim(); ++i)
    out[i] = (1.0 - w) * path.points[lo][i] + w * path.points[hi][i];
  return out;
}

}  // namespace

ActionResult minimize_action(const RateFamily& family, const InitialCost& j0,
                             const ProbabilityVector& q, double t, int nodes,
                             int restarts, std::uint64_t seed,
                             const PathVariable* warm_start) {
  if (!(t > 0.0)) throw std::invalid_argument("minimize_action: t must be > 0");
  if (nodes < 8) throw std::invalid_argument("minimize_action: need at least 8 nodes");
  if (restarts < 1) throw std::invalid_argument("minimize_action: need at least 1 restart");
  if (!q.interior())
    throw std::invalid_argument(
        "minimize_action: target on the simplex boundary; blend toward the "
        "uniform measure and report the limiting trend instead");
  const int d = family.d;
  if (q.dim() != d) throw std::invalid_argument("minimize_action: dimension mismatch");
  if (j0.kind == InitialCost::Kind::indicator && !j0.point)
    throw std::invalid_argument("minimize_action: indicator cost needs a point");

  PathProblem prob;
  prob.family = &family;
  prob.j0 = &j0;
  prob.q = q.weights();
  prob.start_free = (j0.kind == InitialCost::Kind::function);
  prob.start = prob.start_free
                   ? (j0.point ? j0.point->weights() : Vec(d, 1.0 / d))
                   : j0.point->weights();
  prob.d = d;
  prob.intervals = nodes;
  prob.dt = t / nodes;

  const int M = nodes;

  auto pack_path = [&](const std::vector<Vec>& phi) {
    Vec u;
    u.reserve(prob.dof());
    for (int k = 0; k < M; ++k) {
      if (k == 0 && !prob.start_free) continue;
      Vec uk = softmax_coords(phi[k]);
      u.insert(u.end(), uk.begin(), uk.end());
    }
    return u;
  };

  auto clamp_interior = [&](Vec p) {
    double sum = 0.0;
    for (double& v : p) {
      v = std::max(v, 1e-9);
      sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
  };

  // base initial paths
  std::vector<std::vector<Vec>> bases;
  {
    std::vector<Vec> straight(M + 1);
    for (int k = 0; k <= M; ++k) {
      Vec p(d);
      const double w = static_cast<double>(k) / M;
      for (int i = 0; i < d; ++i) p[i] = (1.0 - w) * prob.start[i] + w * prob.q[i];
      straight[k] = clamp_interior(std::move(p));
    }
    bases.push_back(std::move(straight));
  }
  try {
    const Trajectory ode = solve_forward(
        family, ProbabilityVector::renormalized(clamp_interior(prob.start)), t,
        t / std::max(64, M));
    std::vector<Vec> bridge(M + 1);
    Vec ode_end = ode.at(t);
    for (int k = 0; k <= M; ++k) {
      const double tau = t * static_cast<double>(k) / M;
      Vec p = ode.at(tau);
      const double w = static_cast<double>(k) / M;
      for (int i = 0; i < d; ++i) p[i] += w * (prob.q[i] - ode_end[i]);
      bridge[k] = clamp_interior(std::move(p));
    }
    bases.push_back(std::move(bridge));
  } catch (const std::exception&) {
    // integrator failure just drops the bridge seed
  }
  const std::size_t n_base = bases.size();
  if (warm_start && !warm_start->times.empty()) {
    std::vector<Vec> warm(M + 1);
    for (int k = 0; k <= M; ++k) {
      const double tau = t * static_cast<double>(k) / M;
      warm[k] = clamp_interior(interp_path(*warm_start, tau));
    }
    bases.push_back(std::move(warm));
  }

  ActionResult best;
  best.value = kInf;
  best.converged = false;
  Rng rng(seed, 0x61637431);  // fixed stream tag for the perturbations

  const int total_runs = restarts + (warm_start ? 1 : 0);
  for (int run = 0; run < total_runs; ++run) {
    std::size_t base_idx;
    double sigma;
    if (warm_start && run == total_runs - 1) {
      base_idx = bases.size() - 1;  // warm start, unperturbed
      sigma = 0.0;
    } else {
      base_idx = run % n_base;
      sigma = (run < 2) ? 0.0 : 0.08 * (1.0 + 0.5 * (run - 2));
    }
    Vec u = pack_path(bases[base_idx]);
    if (sigma > 0.0) {
      for (double& v : u) {
        // Box-Muller
        const double a = rng.uniform01();
        const double b = rng.uniform01();
        v += sigma * std::sqrt(-2.0 * std::log(a)) * std::cos(6.283185307179586 * b);
      }
    }
    LbfgsOutcome outcome = lbfgs_minimize(prob, std::move(u));
    if (outcome.value < best.value) {
      best.value = outcome.value;
      best.converged = outcome.converged;
      std::vector<Vec> phi;
      prob.decode(outcome.u, phi);
      best.path.times.clear();
      best.path.points.clear();
      for (int k = 0; k <= M; ++k) {
        best.path.times.push_back(t * static_cast<double>(k) / M);
        best.path.points.push_back(ProbabilityVector::renormalized(phi[k]));
      }
    }
  }
  return best;
}

QuasipotentialResult quasipotential(const RateFamily& family,
                                    const ProbabilityVector& pi_star,
                                    const ProbabilityVector& q,
                                    std::span<const double> horizons, int nodes,
                                    int restarts, std::uint64_t seed) {
  if (horizons.empty()) throw std::invalid_argument("quasipotential: no horizons");
  {
    const Vec f = drift(family, pi_star);
    if (l1_norm(f) >= 1e-8)
      throw std::invalid_argument("quasipotential: pi_star is not a drift fixed point");
  }
  Vec hs(horizons.begin(), horizons.end());
  std::sort(hs.begin(), hs.end());

  QuasipotentialResult out;
  out.horizons = hs;
  const InitialCost j0 = InitialCost::indicator(pi_star);

  PathVariable prev_path;
  double prev_h = 0.0;
  double running = kInf;
  for (double h : hs) {
    // hold the time resolution of the shortest horizon so values stay
    // comparable across the sweep; otherwise discretization bias grows
    // with the horizon and masks the monotone decrease
    const int M = static_cast<int>(
        std::min(4096.0, std::max(static_cast<double>(nodes),
                                  std::round(nodes * h / hs.front()))));
    PathVariable warm;
    const PathVariable* warm_ptr = nullptr;
    if (!prev_path.times.empty()) {
      // previous optimum, entered after an initial wait at pi_star
      const double wait = h - prev_h;
      warm.times.clear();
      warm.points.clear();
      for (int k = 0; k <= M; ++k) {
        const double tau = h * static_cast<double>(k) / M;
        Vec p = (tau <= wait) ? pi_star.weights() : interp_path(prev_path, tau - wait);
        warm.times.push_back(tau);
        warm.points.push_back(ProbabilityVector::renormalized(std::move(p)));
      }
      warm_ptr = &warm;
    }
    ActionResult res = minimize_action(family, j0, q, h, M, restarts, seed, warm_ptr);
    out.per_horizon.push_back(res.value);
    if (res.value < running) {
      running = res.value;
      out.best_path = res.path;
    }
    out.running_min.push_back(running);
    prev_path = res.path;
    prev_h = h;
  }
  out.value = running;
  return out;
}

}  // namespace mfre
