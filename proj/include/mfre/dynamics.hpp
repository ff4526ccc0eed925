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

#ifndef MFRE_DYNAMICS_HPP
#define MFRE_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mfre/simplex.hpp"
#include "mfre/types.hpp"

// The mean-field forward equation dp/dt = p Gamma(p) on the simplex: drift
// evaluation, a fixed-grid classical Runge-Kutta integrator, the analytic
// relative-entropy descent rate along linear flows, and a multi-start search
// for fixed points of the drift.
//
// Rate matrices use the row-sum-zero convention Gamma_xx = -sum_{y!=x}
// Gamma_xy, so that p Gamma(p) is the probability flux into each state.

namespace mfre {

// A rate matrix for every simplex point. rates_into must be deterministic
// and is expected to tolerate arguments slightly off the simplex (finite
// differencing and integrator stages evaluate nearby points).
struct RateFamily {
  int d = 0;
  std::function<void(std::span<const double>, Matrix&)> rates_into;
  std::optional<double> lipschitz_hint;

  Matrix rates(std::span<const double> p) const;
  static RateFamily constant(Matrix G);
};

// Off-diagonal entries >= -tol and row sums within tol of zero.
void validate_rate_matrix(const Matrix& G, double tol = 1e-10);

struct Trajectory {
  Vec times;  // strictly increasing
  std::vector<ProbabilityVector> points;

  // Linear interpolation between grid points; clamps outside the range.
  Vec at(double t) const;
};

Vec drift(const RateFamily& family, const ProbabilityVector& p);

// Same, without simplex or rate-matrix validation; used by the integrator
// and by finite-difference Jacobians that step off the simplex.
Vec drift_unchecked(const RateFamily& family, std::span<const double> p, Matrix& scratch);

// Classical 4th-order fixed-step integration. Components that dip into
// [-1e-9, 0) are clamped to 0 and the point renormalized; anything below
// -1e-9 aborts (step too large).
Trajectory solve_forward(const RateFamily& family, const ProbabilityVector& p0,
                         double horizon, double step);

// d/dt R(p(t)||q(t)) for two solutions of the same linear forward equation
// with rate matrix G, evaluated at interior points p, q:
//   -sum_{x!=y} ell(p_y q_x / (p_x q_y)) p_x (q_y/q_x) G_{y,x}  <= 0.
double entropy_descent_rate(const ProbabilityVector& p, const ProbabilityVector& q,
                            const Matrix& G);

// Central-difference Jacobian of the drift, rows indexed by output
// component, columns by input component.
Matrix drift_jacobian(const RateFamily& family, std::span<const double> p,
                      double h = 1e-6);

struct FixedPointSearch {
  std::vector<ProbabilityVector> points;  // sorted lexicographically
  bool all_starts_converged = true;
};

// Multi-start damped Newton on drift(p) = 0 restricted to the simplex,
// seeded on the lattice grid of the given resolution. Points with
// ||drift||_1 < tol are kept and deduplicated at radius 10*tol in l1.
// Unstable fixed points are found as well (Newton does not care about the
// flow direction).
FixedPointSearch find_fixed_points(const RateFamily& family, int grid_resolution,
                                   double tol);

}  // namespace mfre

#endif  // MFRE_DYNAMICS_HPP
