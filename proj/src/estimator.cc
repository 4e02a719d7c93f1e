// Copyright 2026 The LIHE Toolkit Authors.
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

#include "lihe/estimator.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lihe/errors.h"

namespace lihe {

void MixtureErrorModel::validate() const {
  if (!(sigma_e >= 0.0) || !(sigma_h >= 0.0)) {
    throw DomainError("mixture model: standard deviations must be nonnegative");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw DomainError("mixture model: correlation must lie in [-1, 1], got " +
                      std::to_string(rho));
  }
}

double mse_of_mix(double alpha, const MixtureErrorModel& m) {
  const double beta = 1.0 - alpha;
  const double bias = beta * m.b_e + alpha * m.b_h;
  return bias * bias + beta * beta * m.sigma_e * m.sigma_e +
         alpha * alpha * m.sigma_h * m.sigma_h +
         2.0 * alpha * beta * m.rho * m.sigma_e * m.sigma_h;
}

// Expanding f(alpha) with delta = b_h - b_e:
//   A = delta^2 + sigma_e^2 + sigma_h^2 - 2 rho sigma_e sigma_h
//   B = delta b_e - sigma_e^2 + rho sigma_e sigma_h
//   C = b_e^2 + sigma_e^2
QuadraticCoeffs quadratic_coeffs(const MixtureErrorModel& m) {
  const double delta = m.b_h - m.b_e;
  const double cross = m.rho * m.sigma_e * m.sigma_h;
  const double var_e = m.sigma_e * m.sigma_e;
  const double var_h = m.sigma_h * m.sigma_h;
  QuadraticCoeffs q;
  q.a = delta * delta + var_e + var_h - 2.0 * cross;
  q.b = delta * m.b_e - var_e + cross;
  q.c = m.b_e * m.b_e + var_e;
  return q;
}

OptimalAlpha optimal_alpha(const MixtureErrorModel& m) {
  const QuadraticCoeffs q = quadratic_coeffs(m);
  OptimalAlpha out;
  if (q.a <= kDegenerateCurvature) return out;
  const double alpha = -q.b / q.a;
  out.value = alpha;
  out.outside_unit_interval = !(alpha > 0.0 && alpha < 1.0);
  return out;
}

MonteCarloEstimate monte_carlo_mse(double alpha, const MixtureErrorModel& m, std::int64_t n,
                                   std::uint64_t seed) {
  m.validate();
  if (n < 10000) throw DomainError("monte_carlo_mse: need n >= 10^4 draws");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double ortho = std::sqrt(std::max(0.0, 1.0 - m.rho * m.rho));
  // Welford keeps a constant stream exact: the mean never moves off the
  // first value, so zero-variance models reproduce the bias term bit-for-bit.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double u = normal(rng);
    const double v = normal(rng);
    const double eps_e = m.sigma_e * u;
    const double eps_h = m.sigma_h * (m.rho * u + ortho * v);
    const double err = (1.0 - alpha) * (m.b_e + eps_e) + alpha * (m.b_h + eps_h);
    const double sq = err * err;
    const double d = sq - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (sq - mean);
  }
  MonteCarloEstimate out;
  out.estimate = mean;
  const double var = m2 / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

}  // namespace lihe
