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

#ifndef MFRE_GIBBS_HPP
#define MFRE_GIBBS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "mfre/dynamics.hpp"
#include "mfre/simplex.hpp"
#include "mfre/types.hpp"

// Interacting-particle systems of Gibbs type: a smooth per-state potential
// K^x(p) drives an N-particle energy U_N = sum_i K(x_i, empirical measure),
// the Gibbs law pi_N ~ exp(-U_N), and single-site reversible dynamics
// (Metropolis, heat bath, symmetrized). The N -> infinity limit gives a
// nonlinear rate family Gamma(p), per-p stationary laws pi(p), and the
// closed-form Lyapunov candidate F(p) = sum_x (K^x(p) + log p_x) p_x - C.

namespace mfre {

// K : state x simplex-neighborhood -> R with its gradient in the measure
// argument. The gradient is validated against central finite differences at
// construction; a silently wrong gradient would corrupt every rate
// downstream, since the field H enters the dynamics exponentially.
struct GibbsPotential {
  int d = 0;
  std::function<double(int x, std::span<const double>)> value;
  std::function<void(int z, std::span<const double>, std::span<double>)> gradient;

  // Throws if the gradient disagrees with finite differences (tol 1e-6 abs)
  // at a handful of interior sample points.
  void validate(int sample_points = 8, double tol = 1e-6) const;
};

// K(x,p) = V(x) + beta * sum_y W(x,y) p_y.
struct AffinePotential {
  Vec V;
  Matrix W;
  double beta = 1.0;

  int dim() const { return static_cast<int>(V.size()); }
  GibbsPotential to_potential() const;
};

// K(x,p) = V(x) + beta sum_y W(x,y) p_y + (kappa/2) (sum_y S(x,y) p_y)^2.
// The simplest smooth non-affine family; used to exercise the general
// energy-difference path.
struct QuadraticPotential {
  Vec V;
  Matrix W;
  double beta = 1.0;
  Matrix S;
  double kappa = 1.0;

  int dim() const { return static_cast<int>(V.size()); }
  GibbsPotential to_potential() const;
};

// Symmetric 0/1 matrix with zero diagonal describing which single-particle
// moves are allowed; must be connected.
struct Adjacency {
  Matrix alpha;

  explicit Adjacency(Matrix alpha_);
  static Adjacency complete(int d);
  int dim() const { return alpha.n; }
};

enum class DynamicsKind { metropolis, heat_bath, symmetrized };

const char* to_string(DynamicsKind kind);
DynamicsKind dynamics_kind_from_string(const std::string& name);

struct GibbsModel {
  GibbsPotential potential;
  Adjacency adjacency;
  DynamicsKind kind = DynamicsKind::metropolis;

  // Set when the model was built from an affine potential; enables the
  // exact O(d) energy-difference path.
  std::optional<AffinePotential> affine;

  int dim() const { return adjacency.dim(); }
};

GibbsModel make_gibbs_model(AffinePotential pot, Adjacency adj,
                            DynamicsKind kind = DynamicsKind::metropolis);
GibbsModel make_gibbs_model(QuadraticPotential pot, Adjacency adj,
                            DynamicsKind kind = DynamicsKind::metropolis);
GibbsModel make_gibbs_model(GibbsPotential pot, Adjacency adj,
                            DynamicsKind kind = DynamicsKind::metropolis);

// d = 2, V = 0, W = 1 off the diagonal: the classic two-state mean-field
// ferromagnet with its pitchfork at beta = 1.
GibbsModel curie_weiss(double beta, DynamicsKind kind = DynamicsKind::metropolis);

// Phi(q) = sum_x K^x(q) q_x; the per-particle mean energy. U_N of any
// configuration equals N * Phi(empirical measure).
double mean_energy_phi(const GibbsModel& model, std::span<const double> q);

// U_N(config) = sum_i K(x_i, empirical measure of config), summed directly.
double energy_U(const GibbsModel& model, std::span<const int> config);

// H^x(p) = K^x(p) + sum_z dK^z/dp_x (p) p_z; the effective field felt by a
// particle at x.
double field_H(const GibbsModel& model, int x, std::span<const double> p);

// H^y(p) - H^x(p), antisymmetric by construction.
double psi_diff(const GibbsModel& model, int x, int y, std::span<const double> p);

// Exact N-particle energy difference for moving one particle from x to y
// when the empirical measure is r: N [Phi(r + (e_y - e_x)/N) - Phi(r)].
// Affine models use the closed form.
double delta_energy(const GibbsModel& model, long long N, int x, int y,
                    std::span<const double> r);

// delta_energy minus the limit field difference; O(1/N) uniformly.
double remainder_B(const GibbsModel& model, long long N, int x, int y,
                   std::span<const double> r);

// Rate applied by the chosen dynamics to an energy difference.
double dynamics_rate(DynamicsKind kind, double delta);

// Empirical-measure jump rates of the N-particle chain and their limit.
RateFamily prelimit_rate_family(const GibbsModel& model, long long N);
RateFamily limit_rate_family(const GibbsModel& model);

// pi(p)_x = exp(-H^x(p)) / Z(p), computed with max subtraction.
ProbabilityVector limit_stationary_pi(const GibbsModel& model,
                                      std::span<const double> p);

// C = inf_q { R(q||uniform) + Phi(q) } - log d, found by a lattice grid
// scan at the given refinement followed by mirror-descent polishing from
// the best grid cells (the objective can be nonconvex at large coupling).
double gibbs_constant_C(const GibbsModel& model, int refinement);

// F(p) = sum_x (K^x(p) + log p_x) p_x - C, with 0 log 0 = 0.
double lyapunov_F(const GibbsModel& model, const ProbabilityVector& p, double C);

// R(pi_star || p): the reversed-argument candidate. Kept around to
// demonstrate that it fails the descent property under nonlinear dynamics.
double reverse_candidate(const ProbabilityVector& pi_star, const ProbabilityVector& p);

}  // namespace mfre

#endif  // MFRE_GIBBS_HPP
