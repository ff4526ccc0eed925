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

#ifndef MFRE_TESTS_SUPPORT_STATS_HPP
#define MFRE_TESTS_SUPPORT_STATS_HPP

// Test-only statistics: Kolmogorov-Smirnov against a CDF, chi-square
// p-values through the regularized incomplete gamma, and a symmetry
// (Bowker) test. Independent of the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mfre::stats {

// regularized upper incomplete gamma Q(a, x), series + continued fraction
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - gln);
    return 1.0 - p;
  }
  // Q(a,x) by Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_pvalue(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

// asymptotic Kolmogorov distribution tail
inline double kolmogorov_pvalue(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// two-sided KS test of samples against a continuous CDF
inline double ks_test(std::vector<double> samples,
                      const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  const double sqrt_n = std::sqrt(n);
  return kolmogorov_pvalue((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

// chi-square goodness of fit: observed counts vs expected counts
inline double chi_square_gof_pvalue(const std::vector<double>& observed,
                                    const std::vector<double>& expected,
                                    int constraints = 1) {
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 5.0) continue;  // fold sparse cells out
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    ++cells;
  }
  if (cells <= constraints) throw std::invalid_argument("chi_square_gof: too few cells");
  return chi_square_pvalue(stat, cells - constraints);
}

// Bowker symmetry test on a square count table
inline double symmetry_pvalue(const std::vector<std::vector<double>>& counts) {
  const std::size_t d = counts.size();
  double stat = 0.0;
  int dof = 0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const double n_ab = counts[a][b], n_ba = counts[b][a];
      if (n_ab + n_ba < 5.0) continue;
      stat += (n_ab - n_ba) * (n_ab - n_ba) / (n_ab + n_ba);
      ++dof;
    }
  if (dof == 0) throw std::invalid_argument("symmetry_pvalue: no informative cells");
  return chi_square_pvalue(stat, dof);
}

}  // namespace mfre::stats

#endif  // MFRE_TESTS_SUPPORT_STATS_HPP
