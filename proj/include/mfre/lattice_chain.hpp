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

#ifndef MFRE_LATTICE_CHAIN_HPP
#define MFRE_LATTICE_CHAIN_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "mfre/dynamics.hpp"
#include "mfre/gibbs.hpp"
#include "mfre/parallel.hpp"
#include "mfre/simplex.hpp"

// Exact finite-N computations on the empirical-measure Markov chain: sparse
// generator assembly (transition r -> r + (e_y - e_x)/N at rate
// N r_x Gamma^N_xy(r)), transient laws by uniformization, stationary laws,
// and exact scaled relative entropies (1/N) R(product-law || chain-law).

namespace mfre {

struct LatticeGenerator {
  long long N = 0;
  int d = 0;
  LatticePtr lattice;

  // off-diagonal entries in CSR layout, rows in lattice order, entries per
  // row ordered by (from-state, to-state)
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  Vec rate;
  Vec diag;  // negative row sums

  double uniformization_lambda() const;  // max |diag|
  TransitionKernel uniformized_kernel(double lambda) const;
};

LatticeGenerator build_generator(const RateFamily& family_at_N, long long N,
                                 std::size_t cap = LatticeEnumeration::kDefaultCap);

// Probability weights indexed by the shared lattice enumeration.
struct LatticeDistribution {
  LatticePtr lattice;
  Vec weights;

  LatticeDistribution(LatticePtr lattice_, Vec weights_);
  long long particles() const { return lattice->particles(); }
  std::size_t size() const { return weights.size(); }
};

// Law of the empirical measure of N iid draws from rho (multinomial).
LatticeDistribution multinomial_pushforward(LatticePtr lattice,
                                            const ProbabilityVector& rho);

// Empirical-measure law of the N-particle Gibbs measure: weight(r)
// proportional to exp(log_multiplicity(r) - N Phi(r/N)).
LatticeDistribution gibbs_pushforward(LatticePtr lattice, const GibbsModel& model);

// Point mass at the lattice point closest to target in l1 (ties resolved by
// enumeration order).
LatticeDistribution point_mass_nearest(LatticePtr lattice,
                                       const ProbabilityVector& target);

// exact log Z_N = log sum_r exp(log_multiplicity(r) - N Phi(r/N))
double log_partition_lattice(LatticePtr lattice, const GibbsModel& model);

struct TransientResult {
  LatticeDistribution dist;
  bool degenerate_absorbing = false;  // lambda == 0 with t > 0
  int terms_used = 0;
};

// Uniformization: Poisson(lambda t)-weighted powers of I + L/lambda summed
// until the Poisson tail drops below tol; total-variation error <= tol.
// Preserves nonnegativity exactly; the result is renormalized.
TransientResult transient_distribution(const LatticeGenerator& gen,
                                       const LatticeDistribution& init, double t,
                                       double tol, Exec exec = Exec::parallel);

// Stationary law of the lattice chain. Requires irreducibility (checked on
// the sparse pattern). Birth-death patterns (always the case for d = 2) use
// an O(n) log-domain recursion; everything else goes through GTH
// elimination, which is subtraction-free and safe for the tiny stationary
// masses that show up at N in the hundreds.
LatticeDistribution stationary_distribution(const LatticeGenerator& gen);

// residual max_j |sum_i pi_i L_ij|, for verification
double stationary_residual(const LatticeGenerator& gen, const LatticeDistribution& pi);

// (1/N) R(product(q)^N || Q^N) computed exactly through the class function
// of the exchangeable law Q^N represented by its empirical-measure law m:
//   sum_x q_x log q_x - sum_r Multinomial(N,q)(r) * (1/N) log(m(r)/C(r)).
// Returns +infinity iff the multinomial law charges a point where m
// vanishes.
double scaled_product_entropy(const ProbabilityVector& q, const LatticeDistribution& m,
                              Exec exec = Exec::parallel);

// (1/N) R(product(q)^N || law at time t) along the chain, one value per
// requested time (times must be nondecreasing, evolved incrementally).
Vec entropy_curve(const LatticeGenerator& gen, const ProbabilityVector& q,
                  const LatticeDistribution& init, std::span<const double> times,
                  double tol = 1e-10, Exec exec = Exec::parallel);

// CSV import/export, columns: count_1,...,count_d,weight.
void write_lattice_csv(std::ostream& os, const LatticeDistribution& dist);
LatticeDistribution read_lattice_csv(std::istream& is, std::size_t cap =
                                     LatticeEnumeration::kDefaultCap);

}  // namespace mfre

#endif  // MFRE_LATTICE_CHAIN_HPP
