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

// Lorentz (hyperboloid) model of hyperbolic space with curvature -kappa.
//
// A point x in R^{n+1} lies on the model when <x, x>_L = -1/kappa and
// x_0 > 0, where <x, y>_L = -x_0 y_0 + sum_i x_i y_i. Everything here is
// computed in double precision.

#include <Eigen/Dense>

namespace lihe {

using Vec = Eigen::VectorXd;

inline constexpr double kDefaultKappa = 1.0;

// Below this norm (or distance) exp/log switch to their series limits.
inline constexpr double kSeriesThreshold = 1e-8;

struct CurvedPoint {
  double time = 0.0;
  Vec spatial;
  double kappa = kDefaultKappa;

  Eigen::Index dim() const { return spatial.size(); }
  // (time, spatial...) as one (n+1)-vector.
  Vec ambient() const;
};

// Ambient (n+1)-vector Lorentz-orthogonal to `base`.
struct TangentVector {
  double time = 0.0;
  Vec spatial;
  CurvedPoint base;

  Vec ambient() const;
};

// -x_0 y_0 + <x_{1:n}, y_{1:n}>. Throws ContractViolation on size mismatch
// or when n < 1.
double lorentz_inner(const Vec& x, const Vec& y);
double lorentz_inner(const CurvedPoint& x, const CurvedPoint& y);

// Places z on the upper sheet: time = sqrt(|z|^2 + 1/kappa).
CurvedPoint lift(const Vec& z, double kappa = kDefaultKappa);

// The point with zero spatial part, (1/sqrt(kappa), 0, ..., 0).
CurvedPoint apex(Eigen::Index dim, double kappa = kDefaultKappa);

// (1/sqrt(kappa)) * arccosh(max(1, -kappa <x, y>_L)).
double geodesic_distance(const CurvedPoint& x, const CurvedPoint& y);

// v + kappa <p, v>_L p, the Lorentz-orthogonal projection onto T_p.
TangentVector tangent_project(const CurvedPoint& p, const Vec& v);

// Lorentz norm sqrt(<v, v>_L) of a tangent vector. Throws DomainError if
// the vector is timelike beyond tolerance.
double tangent_norm(const TangentVector& v);

CurvedPoint exp_map(const CurvedPoint& p, const TangentVector& v);
TangentVector log_map(const CurvedPoint& p, const CurvedPoint& q);

bool is_on_hyperboloid(const Vec& x, double kappa, double tol);
bool is_on_hyperboloid(const CurvedPoint& x, double tol);

// Relative tolerance check from the CurvedPoint invariant,
// |<x,x>_L + 1/kappa| <= 1e-9 * max(1, |spatial|^2).
bool satisfies_invariant(const CurvedPoint& x);

}  // namespace lihe
