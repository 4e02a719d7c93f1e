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

#include "lihe/lorentz.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "lihe/errors.h"

namespace lihe {
namespace {

constexpr double kClampReportThreshold = 1e-6;
constexpr double kInvariantTol = 1e-9;

void check_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("curvature parameter kappa must be positive and finite, got " +
                      std::to_string(kappa));
  }
}

void check_same_space(const CurvedPoint& x, const CurvedPoint& y) {
  if (x.kappa != y.kappa) {
    throw DomainError("curvature mismatch: " + std::to_string(x.kappa) + " vs " +
                      std::to_string(y.kappa));
  }
  if (x.dim() != y.dim()) {
    throw ContractViolation("dimension mismatch between hyperboloid points");
  }
}

// Re-derive the time coordinate so the point sits exactly on the sheet.
CurvedPoint on_sheet(Vec spatial, double kappa) {
  CurvedPoint p;
  p.time = std::sqrt(spatial.squaredNorm() + 1.0 / kappa);
  p.spatial = std::move(spatial);
  p.kappa = kappa;
  return p;
}

}  // namespace

Vec CurvedPoint::ambient() const {
  Vec out(spatial.size() + 1);
  out(0) = time;
  out.tail(spatial.size()) = spatial;
  return out;
}

Vec TangentVector::ambient() const {
  Vec out(spatial.size() + 1);
  out(0) = time;
  out.tail(spatial.size()) = spatial;
  return out;
}

double lorentz_inner(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) {
    throw ContractViolation("lorentz_inner: dimension mismatch (" + std::to_string(x.size()) +
                            " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw ContractViolation("lorentz_inner: need at least one spatial coordinate");
  }
  const Eigen::Index n = x.size() - 1;
  return -x(0) * y(0) + x.tail(n).dot(y.tail(n));
}

double lorentz_inner(const CurvedPoint& x, const CurvedPoint& y) {
  if (x.dim() != y.dim()) {
    throw ContractViolation("lorentz_inner: dimension mismatch");
  }
  return -x.time * y.time + x.spatial.dot(y.spatial);
}

CurvedPoint lift(const Vec& z, double kappa) {
  check_kappa(kappa);
  if (!z.allFinite()) {
    throw DomainError("lift: spatial coordinates must be finite");
  }
  return on_sheet(z, kappa);
}

CurvedPoint apex(Eigen::Index dim, double kappa) { return lift(Vec::Zero(dim), kappa); }

double geodesic_distance(const CurvedPoint& x, const CurvedPoint& y) {
  check_same_space(x, y);
  // Coincident points: the arccosh form would turn roundoff into ~1e-8.
  if (x.time == y.time && x.spatial == y.spatial) return 0.0;
  const double kappa = x.kappa;
  const double arg = -kappa * lorentz_inner(x, y);
  if (arg < 1.0 - kClampReportThreshold) {
    spdlog::warn("geodesic_distance: arccosh argument {} clamped to 1 (inputs off the sheet?)",
                 arg);
  }
  return std::acosh(std::max(arg, 1.0)) / std::sqrt(kappa);
}

TangentVector tangent_project(const CurvedPoint& p, const Vec& v) {
  if (v.size() != p.dim() + 1) {
    throw ContractViolation("tangent_project: vector must have dimension n+1");
  }
  const Vec pa = p.ambient();
  const Vec projected = v + p.kappa * lorentz_inner(pa, v) * pa;
  TangentVector out;
  out.time = projected(0);
  out.spatial = projected.tail(p.dim());
  out.base = p;
  return out;
}

double tangent_norm(const TangentVector& v) {
  const double sq = -v.time * v.time + v.spatial.squaredNorm();
  const double tol = kInvariantTol * std::max(1.0, v.time * v.time + v.spatial.squaredNorm());
  if (sq < -tol) {
    throw DomainError("tangent vector is timelike (<v,v>_L = " + std::to_string(sq) + ")");
  }
  return std::sqrt(std::max(sq, 0.0));
}

CurvedPoint exp_map(const CurvedPoint& p, const TangentVector& v) {
  if (v.spatial.size() != p.dim()) {
    throw ContractViolation("exp_map: tangent dimension mismatch");
  }
  const double norm = tangent_norm(v);
  if (norm < kSeriesThreshold) {
    // cosh -> 1, sinh(x)/x -> 1; the first-order displacement is below
    // roundoff of the base point.
    if (norm == 0.0) return p;
    return on_sheet(p.spatial + v.spatial, p.kappa);
  }
  const double s = std::sqrt(p.kappa) * norm;
  const double c = std::cosh(s);
  const double k = std::sinh(s) / s;
  return on_sheet(c * p.spatial + k * v.spatial, p.kappa);
}

TangentVector log_map(const CurvedPoint& p, const CurvedPoint& q) {
  check_same_space(p, q);
  const double d = geodesic_distance(p, q);
  const double inner = lorentz_inner(p, q);
  TangentVector out;
  out.base = p;
  // Component of q orthogonal to p.
  const double ot = q.time + p.kappa * inner * p.time;
  const Vec os = q.spatial + p.kappa * inner * p.spatial;
  if (d < kSeriesThreshold) {
    // sqrt(k) d / sinh(sqrt(k) d) -> 1 as d -> 0.
    if (d == 0.0) {
      out.time = 0.0;
      out.spatial = Vec::Zero(p.dim());
      return out;
    }
    out.time = ot;
    out.spatial = os;
    return out;
  }
  const double s = std::sqrt(p.kappa) * d;
  const double factor = s / std::sinh(s);
  out.time = factor * ot;
  out.spatial = factor * os;
  return out;
}

bool is_on_hyperboloid(const Vec& x, double kappa, double tol) {
  check_kappa(kappa);
  if (x.size() < 2 || !x.allFinite()) return false;
  if (!(x(0) > 0.0)) return false;
  return std::abs(lorentz_inner(x, x) + 1.0 / kappa) <= tol;
}

bool is_on_hyperboloid(const CurvedPoint& x, double tol) {
  return is_on_hyperboloid(x.ambient(), x.kappa, tol);
}

bool satisfies_invariant(const CurvedPoint& x) {
  const double tol = kInvariantTol * std::max(1.0, x.spatial.squaredNorm());
  return x.time > 0.0 && std::abs(lorentz_inner(x, x) + 1.0 / x.kappa) <= tol;
}

}  // namespace lihe
