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

#ifndef MFRE_ACTION_HPP
#define MFRE_ACTION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mfre/dynamics.hpp"
#include "mfre/simplex.hpp"

// The variational layer for mean-field jump dynamics. The local cost of
// forcing velocity zeta at state p is the Legendre transform
//   L(p, zeta) = sup_alpha { <alpha, zeta> - H(p, alpha) },
//   H(p, alpha) = sum_{x != y} p_x Gamma_xy(p) (e^{alpha_y - alpha_x} - 1),
// equivalently the cheapest ell-weighted flux decomposition of zeta. Path
// actions are minimized over simplex-valued paths to produce the
// finite-horizon cost of reaching a target law and, over all horizons, the
// Freidlin-Wentzell quasipotential of a stable point.

namespace mfre {

// momentum / log-tilt variable, defined modulo constants; canonical form
// has mean zero
struct DualVector {
  Vec alpha;

  static DualVector canonical(Vec alpha);
};

double hamiltonian(const RateFamily& family, std::span<const double> p,
                   std::span<const double> alpha);

struct LagrangianResult {
  double value = 0.0;
  Vec alpha_star;     // maximizer, canonicalized; empty when not finite
  bool finite = true; // false: the supremum diverges (zeta needs a dead transition)
  int iterations = 0;
};

// Concave maximization over alpha with sum(alpha) = 0: Newton with
// backtracking; gradient tolerance grad_tol; divergence declared when the
// iterate norm passes alpha_bound.
LagrangianResult local_lagrangian(const RateFamily& family, std::span<const double> p,
                                  std::span<const double> zeta,
                                  double grad_tol = 1e-10, double alpha_bound = 200.0);

// Initial cost J0 for the path action: the indicator of a point (0 there,
// +infinity elsewhere, so the path start is pinned), or a finite-valued
// function of the start (its gradient may be omitted, finite differences
// are used then).
struct InitialCost {
  enum class Kind { indicator, function };
  Kind kind = Kind::indicator;
  std::optional<ProbabilityVector> point;
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> grad;

  static InitialCost indicator(ProbabilityVector at);
  static InitialCost relative_entropy_to(ProbabilityVector rho);
  static InitialCost custom(std::function<double(std::span<const double>)> value,
                            std::function<Vec(std::span<const double>)> grad = nullptr);
};

struct PathVariable {
  Vec times;  // uniform grid on [0, t]
  std::vector<ProbabilityVector> points;
};

struct ActionResult {
  double value = 0.0;
  PathVariable path;
  bool converged = true;
};

// Discretized action: midpoint quadrature in space, forward differences in
// velocity, minimized over interior softmax coordinates (and the start
// point when J0 is finite-valued) by L-BFGS with restarts from perturbed
// straight-line and ODE-bridge paths. The returned value is an upper bound
// on the continuum infimum, decreasing in `nodes`.
ActionResult minimize_action(const RateFamily& family, const InitialCost& j0,
                             const ProbabilityVector& q, double t, int nodes,
                             int restarts, std::uint64_t seed = 0,
                             const PathVariable* warm_start = nullptr);

struct QuasipotentialResult {
  double value = 0.0;           // min over horizons
  Vec horizons;
  Vec per_horizon;              // raw minimized action per horizon
  Vec running_min;
  PathVariable best_path;
};

// min over the horizon list of the path action started from the indicator
// at pi_star (a drift fixed point); later horizons are warm-started from
// earlier optima extended by waiting at pi_star.
QuasipotentialResult quasipotential(const RateFamily& family,
                                    const ProbabilityVector& pi_star,
                                    const ProbabilityVector& q,
                                    std::span<const double> horizons, int nodes,
                                    int restarts, std::uint64_t seed = 0);

}  // namespace mfre

#endif  // MFRE_ACTION_HPP
