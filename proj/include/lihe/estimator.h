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

#pragma once

#include <cstdint>
#include <optional>

namespace lihe {

// Error model of the two similarity estimators: Sim_E = Sim* + b_e + eps_E,
// Sim_H = Sim* + b_h + eps_H, with Var[eps_E] = sigma_e^2,
// Var[eps_H] = sigma_h^2 and Corr[eps_E, eps_H] = rho.
struct MixtureErrorModel {
  double b_e = 0.0;
  double b_h = 0.0;
  double sigma_e = 0.0;
  double sigma_h = 0.0;
  double rho = 0.0;

  // Throws DomainError on negative sigmas or |rho| > 1.
  void validate() const;
};

// f(alpha) = A alpha^2 + 2 B alpha + C
struct QuadraticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double alpha) const { return a * alpha * alpha + 2.0 * b * alpha + c; }
};

inline constexpr double kDegenerateCurvature = 1e-14;

struct OptimalAlpha {
  // Empty when A <= 1e-14 (flat or degenerate quadratic).
  std::optional<double> value;
  // alpha* was computed but lies outside the open interval (0, 1).
  bool outside_unit_interval = false;

  bool degenerate() const { return !value.has_value(); }
};

// MSE of (1 - alpha) Sim_E + alpha Sim_H as an estimator of Sim*.
double mse_of_mix(double alpha, const MixtureErrorModel& m);

QuadraticCoeffs quadratic_coeffs(const MixtureErrorModel& m);

// Stationary point -B/A of the quadratic. Not clamped.
OptimalAlpha optimal_alpha(const MixtureErrorModel& m);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Mean squared mixed error over n correlated Gaussian draws. n >= 10^4.
MonteCarloEstimate monte_carlo_mse(double alpha, const MixtureErrorModel& m, std::int64_t n,
                                   std::uint64_t seed);

}  // namespace lihe
