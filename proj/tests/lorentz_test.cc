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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lihe/errors.h"

namespace lihe {
namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

TEST(LorentzInner, ApexSelfProduct) {
  EXPECT_DOUBLE_EQ(lorentz_inner(v3(1, 0, 0), v3(1, 0, 0)), -1.0);
}

TEST(LorentzInner, HandEvaluatedPair) {
  const double got = lorentz_inner(v3(1, 0, 0), v3(std::cosh(1.0), std::sinh(1.0), 0));
  EXPECT_NEAR(got, -1.5430806, 1e-7);
  EXPECT_DOUBLE_EQ(got, -std::cosh(1.0));
}

TEST(LorentzInner, LiftedPointWithKappaTwo) {
  const CurvedPoint p = lift(v2(0.3, -1.7), 2.0);
  EXPECT_NEAR(lorentz_inner(p, p), -0.5, 1e-12);
}

TEST(LorentzInner, DimensionMismatchIsContractViolation) {
  EXPECT_THROW(lorentz_inner(v3(1, 0, 0), v2(1, 0)), ContractViolation);
  EXPECT_THROW(lorentz_inner(Vec::Ones(1), Vec::Ones(1)), ContractViolation);
}

TEST(Lift, ZeroIsApex) {
  const CurvedPoint p = lift(v2(0, 0), 1.0);
  EXPECT_EQ(p.time, 1.0);
  EXPECT_EQ(p.spatial, v2(0, 0));
}

TEST(Lift, TimeCoordinate) {
  EXPECT_NEAR(lift(v2(3, 0), 1.0).time, 3.1622777, 1e-7);
  EXPECT_DOUBLE_EQ(lift(v2(3, 0), 1.0).time, std::sqrt(10.0));
  EXPECT_DOUBLE_EQ(lift(v2(0, 0), 4.0).time, 0.5);
  EXPECT_DOUBLE_EQ(apex(3, 4.0).time, 0.5);
}

TEST(Lift, RejectsBadInput) {
  EXPECT_THROW(lift(v2(1, 0), 0.0), DomainError);
  EXPECT_THROW(lift(v2(1, 0), -1.0), DomainError);
  EXPECT_THROW(lift(v2(NAN, 0), 1.0), DomainError);
  EXPECT_THROW(lift(v2(INFINITY, 0), 1.0), DomainError);
}

TEST(GeodesicDistance, IdentityIsZero) {
  const CurvedPoint p = lift(v3(0.4, -2.5, 7.0), 0.7);
  EXPECT_EQ(geodesic_distance(p, p), 0.0);
}

TEST(GeodesicDistance, UnitGeodesic) {
  const CurvedPoint q = lift(v2(std::sinh(1.0), 0), 1.0);
  EXPECT_NEAR(geodesic_distance(apex(2, 1.0), q), 1.0, 1e-12);
}

TEST(GeodesicDistance, CurvatureScaling) {
  const CurvedPoint q = lift(v2(std::sinh(2.0) / 2.0, 0), 4.0);
  EXPECT_NEAR(geodesic_distance(apex(2, 4.0), q), 1.0, 1e-12);
}

TEST(GeodesicDistance, CurvatureMismatchIsDomainError) {
  EXPECT_THROW(geodesic_distance(lift(v2(1, 0), 1.0), lift(v2(1, 0), 2.0)), DomainError);
}

TEST(TangentProject, OrthogonalVectorUnchanged) {
  const CurvedPoint p = apex(2, 1.0);
  const TangentVector t = tangent_project(p, v3(0, 0.3, -0.4));
  EXPECT_EQ(t.ambient(), v3(0, 0.3, -0.4));
}

TEST(TangentProject, PointItselfProjectsToZero) {
  const CurvedPoint p = lift(v2(0.5, 1.5), 1.0);
  const TangentVector t = tangent_project(p, p.ambient());
  EXPECT_LT(t.ambient().norm(), 1e-12);
}

TEST(TangentProject, ApexDropsTimeComponent) {
  const TangentVector t = tangent_project(apex(2, 1.0), v3(1, 1, 0));
  EXPECT_EQ(t.ambient(), v3(0, 1, 0));
}

TEST(TangentProject, ResultIsOrthogonalToBase) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 100; ++i) {
    const double kappa = 0.5 + i * 0.03;
    const CurvedPoint p = lift(v3(n(rng), n(rng), n(rng)), kappa);
    const Vec raw = (Vec(4) << n(rng), n(rng), n(rng), n(rng)).finished();
    const TangentVector t = tangent_project(p, raw);
    EXPECT_LE(std::abs(lorentz_inner(p.ambient(), t.ambient())), 1e-9 * (1 + t.ambient().norm()));
  }
}

TEST(ExpMap, ZeroVelocityReturnsBase) {
  const CurvedPoint p = lift(v2(0.2, 0.9), 1.5);
  TangentVector zero;
  zero.time = 0;
  zero.spatial = v2(0, 0);
  zero.base = p;
  const CurvedPoint q = exp_map(p, zero);
  EXPECT_EQ(q.time, p.time);
  EXPECT_EQ(q.spatial, p.spatial);
}

TEST(ExpMap, ApexAlongAxis) {
  const CurvedPoint p = apex(2, 1.0);
  const TangentVector v = tangent_project(p, v3(0, 1.0, 0));
  const CurvedPoint q = exp_map(p, v);
  EXPECT_NEAR(q.time, std::cosh(1.0), 1e-14);
  EXPECT_NEAR(q.spatial(0), std::sinh(1.0), 1e-14);
  EXPECT_EQ(q.spatial(1), 0.0);
}

TEST(ExpMap, UnitSpeed) {
  const CurvedPoint p = lift(v2(0.3, -0.8), 2.0);
  TangentVector v = tangent_project(p, v3(0.1, 0.6, 0.2));
  const double scale = 0.7 / tangent_norm(v);
  v.time *= scale;
  v.spatial *= scale;
  EXPECT_NEAR(geodesic_distance(p, exp_map(p, v)), 0.7, 1e-12);
}

TEST(ExpMap, TinyTangentStaysOnSheet) {
  const CurvedPoint p = lift(v2(0.3, -0.8), 1.0);
  TangentVector v = tangent_project(p, v3(0, 1e-10, 0));
  const CurvedPoint q = exp_map(p, v);
  EXPECT_TRUE(satisfies_invariant(q));
  // Second-order terms are ~1e-20, far below rounding of p itself.
  EXPECT_LE((q.ambient() - p.ambient() - v.ambient()).norm(), 1e-15);
}

TEST(ExpMap, TimelikeTangentIsDomainError) {
  const CurvedPoint p = apex(2, 1.0);
  TangentVector v;
  v.time = 1.0;
  v.spatial = v2(0, 0);
  v.base = p;
  EXPECT_THROW(exp_map(p, v), DomainError);
}

TEST(LogMap, SelfIsZero) {
  const CurvedPoint p = lift(v2(1.2, -0.4), 0.6);
  EXPECT_EQ(log_map(p, p).ambient(), Vec::Zero(3));
}

TEST(LogMap, InvertsExpAndHasGeodesicSpeed) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double kappa = 0.25 + 0.02 * i;
    const CurvedPoint p = lift(v3(n(rng), n(rng), n(rng)), kappa);
    const CurvedPoint q = lift(v3(n(rng), n(rng), n(rng)), kappa);
    const TangentVector v = log_map(p, q);
    const CurvedPoint back = exp_map(p, v);
    EXPECT_LE((back.ambient() - q.ambient()).norm(), 1e-7 * std::max(1.0, q.ambient().norm()));
    EXPECT_NEAR(tangent_norm(v), geodesic_distance(p, q), 1e-9);
  }
}

TEST(Membership, Examples) {
  EXPECT_TRUE(is_on_hyperboloid(lift(v2(4, -7), 3.0), 1e-9 * 65));
  EXPECT_FALSE(is_on_hyperboloid(v3(-1, 0, 0), 1.0, 1e-9));
  EXPECT_FALSE(is_on_hyperboloid(v3(1, 1, 0), 1.0, 1e-9));
  EXPECT_FALSE(is_on_hyperboloid(v3(NAN, 0, 0), 1.0, 1e-9));
}

TEST(Membership, LargeCoordinatesWithinScaledTolerance) {
  const Vec z = v3(1e4, -3e3, 2e2);
  EXPECT_TRUE(satisfies_invariant(lift(z, 0.3)));
}

}  // namespace
}  // namespace lihe
