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

#include "lihe/hemix.h"

#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lihe/errors.h"

namespace lihe {
namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

Vec random_vec(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n(0, 1);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
  return v;
}

TEST(SimEuclidean, IdentityExamples) {
  const ProjectionBundle b = ProjectionBundle::identity(2);
  EXPECT_EQ(sim_euclidean(v2(1, 0), v2(0, 1), b), 0.0);
  EXPECT_EQ(sim_euclidean(v2(1, 2), v2(1, 2), b), 5.0);
}

TEST(SimEuclidean, ZeroFeatureGivesZero) {
  const ProjectionBundle b = ProjectionBundle::random(5, 9);
  std::mt19937_64 rng(1);
  EXPECT_EQ(sim_euclidean(Vec::Zero(5), random_vec(rng, 5), b), 0.0);
}

TEST(SimEuclidean, RowVectorConvention) {
  // Non-symmetric weights tell f*W apart from W*f.
  ProjectionBundle b = ProjectionBundle::identity(2);
  b.w_ev << 1, 2, 3, 4;
  const Vec f = v2(1, 1);
  // Row vector (1,1) * [[1,2],[3,4]] = (4, 6).
  EXPECT_EQ(sim_euclidean(f, v2(1, 0), b), 4.0);
  EXPECT_EQ(sim_euclidean(f, v2(0, 1), b), 6.0);
}

TEST(SimEuclidean, Bilinear) {
  const ProjectionBundle b = ProjectionBundle::random(6, 4);
  std::mt19937_64 rng(2);
  const Vec fv = random_vec(rng, 6);
  const Vec ft = random_vec(rng, 6);
  EXPECT_NEAR(sim_euclidean(2.5 * fv, ft, b), 2.5 * sim_euclidean(fv, ft, b), 1e-12);
}

TEST(SimEuclidean, DimensionMismatch) {
  const ProjectionBundle b = ProjectionBundle::identity(3);
  EXPECT_THROW(sim_euclidean(v2(1, 0), Vec::Zero(3), b), ContractViolation);
}

TEST(HyperbolicEmbed, ZeroMapsToApex) {
  const CurvedPoint p = hyperbolic_embed(Vec::Zero(3), Mat::Identity(3, 3), 4.0);
  EXPECT_EQ(p.time, 0.5);
  EXPECT_EQ(p.spatial, Vec::Zero(3));
}

TEST(HyperbolicEmbed, IdentityComposesWithLift) {
  EXPECT_DOUBLE_EQ(hyperbolic_embed(v2(3, 0), Mat::Identity(2, 2), 1.0).time, std::sqrt(10.0));
}

TEST(HyperbolicEmbed, AlwaysOnSheet) {
  std::mt19937_64 rng(5);
  for (EmbedMode mode : {EmbedMode::kLift, EmbedMode::kExpMap}) {
    for (int i = 0; i < 50; ++i) {
      const Mat w = Mat::Random(4, 4);
      const CurvedPoint p = hyperbolic_embed(random_vec(rng, 4), w, 0.5 + i * 0.05, mode);
      EXPECT_TRUE(satisfies_invariant(p));
    }
  }
}

TEST(HyperbolicEmbed, ExpMapModeMatchesApexExpMap) {
  const Vec f = v2(0.4, -0.3);
  const double kappa = 2.0;
  const CurvedPoint got = hyperbolic_embed(f, Mat::Identity(2, 2), kappa, EmbedMode::kExpMap);
  const CurvedPoint o = apex(2, kappa);
  const CurvedPoint want = exp_map(o, tangent_project(o, (Vec(3) << 0, f(0), f(1)).finished()));
  EXPECT_NEAR((got.ambient() - want.ambient()).norm(), 0.0, 1e-14);
}

TEST(HyperbolicEmbed, NonFiniteProjection) {
  Mat w = Mat::Identity(2, 2);
  w(0, 0) = INFINITY;
  EXPECT_THROW(hyperbolic_embed(v2(1, 0), w, 1.0), DomainError);
}

TEST(SimHyperbolic, ApexSelfSimilarity) {
  const ProjectionBundle b = ProjectionBundle::identity(3);
  EXPECT_EQ(sim_hyperbolic(Vec::Zero(3), Vec::Zero(3), b), -1.0);
}

TEST(SimHyperbolic, HandEvaluated) {
  const ProjectionBundle b = ProjectionBundle::identity(2);
  EXPECT_NEAR(sim_hyperbolic(v2(1.1752012, 0), v2(0, 0), b), -1.5430806, 1e-7);
}

TEST(SimHyperbolic, SharedProjectionAttainsMaximum) {
  std::mt19937_64 rng(6);
  ProjectionBundle b = ProjectionBundle::random(5, 8, 0.5, 0.07, 1.7);
  b.w_ht = b.w_hv;
  for (int i = 0; i < 50; ++i) {
    const Vec f = random_vec(rng, 5);
    EXPECT_NEAR(sim_hyperbolic(f, f, b), -1.0 / 1.7, 1e-9 * std::max(1.0, f.squaredNorm()));
  }
}

TEST(SimHyperbolic, NeverAboveMinusInverseKappa) {
  std::mt19937_64 rng(7);
  const ProjectionBundle b = ProjectionBundle::random(4, 3, 0.5, 0.07, 0.8);
  for (int i = 0; i < 200; ++i) {
    EXPECT_LE(sim_hyperbolic(random_vec(rng, 4), random_vec(rng, 4), b), -1.0 / 0.8 + 1e-12);
  }
}

TEST(Hemix, Endpoints) {
  std::mt19937_64 rng(8);
  ProjectionBundle b = ProjectionBundle::random(4, 1);
  for (int i = 0; i < 100; ++i) {
    const Vec fv = random_vec(rng, 4);
    const Vec ft = random_vec(rng, 4);
    b.alpha = 0.0;
    EXPECT_EQ(hemix(fv, ft, b), sim_euclidean(fv, ft, b));
    b.alpha = 1.0;
    EXPECT_EQ(hemix(fv, ft, b), sim_hyperbolic(fv, ft, b));
  }
}

TEST(Hemix, MixingHandExample) { EXPECT_EQ(mix_scores(2.0, -1.0, 0.5), 0.5); }

TEST(Hemix, AlphaOutsideUnitInterval) {
  ProjectionBundle b = ProjectionBundle::identity(2);
  b.alpha = 1.5;
  EXPECT_THROW(hemix(v2(1, 0), v2(1, 0), b), DomainError);
}

TEST(ProjectionBundle, ValidateRejectsEndpointsByDefault) {
  ProjectionBundle b = ProjectionBundle::identity(2);
  b.alpha = 0.0;
  EXPECT_THROW(b.validate(), DomainError);
  EXPECT_NO_THROW(b.validate(true));
  b.alpha = 0.5;
  b.tau = 0.0;
  EXPECT_THROW(b.validate(), DomainError);
  b.tau = 0.07;
  b.kappa = -1.0;
  EXPECT_THROW(b.validate(), DomainError);
  b.kappa = 1.0;
  b.w_ht = Mat::Identity(3, 3);
  EXPECT_THROW(b.validate(), ContractViolation);
}

TEST(ProjectionBundle, RandomIsSeededAndScaled) {
  const ProjectionBundle a = ProjectionBundle::random(16, 42);
  const ProjectionBundle b = ProjectionBundle::random(16, 42);
  const ProjectionBundle c = ProjectionBundle::random(16, 43);
  EXPECT_EQ(a.w_ev, b.w_ev);
  EXPECT_EQ(a.w_ht, b.w_ht);
  EXPECT_NE(a.w_ev, c.w_ev);
  EXPECT_LE(a.w_ev.cwiseAbs().maxCoeff(), 1.0 / 4.0);
}

TEST(BundleFile, RoundTripIsBitExact) {
  ProjectionBundle b = ProjectionBundle::random(5, 77, 0.3, 0.2, 1.4);
  b.embed_mode = EmbedMode::kExpMap;
  b.w_ev(1, 3) = 1.0 / 3.0;
  const ProjectionBundle back = bundle_from_json(bundle_to_json(b));
  EXPECT_EQ(back.w_ev, b.w_ev);
  EXPECT_EQ(back.w_et, b.w_et);
  EXPECT_EQ(back.w_hv, b.w_hv);
  EXPECT_EQ(back.w_ht, b.w_ht);
  EXPECT_EQ(back.alpha, b.alpha);
  EXPECT_EQ(back.tau, b.tau);
  EXPECT_EQ(back.kappa, b.kappa);
  EXPECT_EQ(back.embed_mode, EmbedMode::kExpMap);
}

TEST(BundleFile, RowMajorOnDisk) {
  ProjectionBundle b = ProjectionBundle::identity(2);
  b.w_ev << 1, 2, 3, 4;
  const auto j = nlohmann::json::parse(bundle_to_json(b));
  EXPECT_EQ(j.at("w_ev"), nlohmann::json::parse("[1.0, 2.0, 3.0, 4.0]"));
  EXPECT_EQ(j.at("layout"), "row-major");
  EXPECT_EQ(j.at("D"), 2);
}

TEST(BundleFile, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "lihe_bundle_test.json";
  const ProjectionBundle b = ProjectionBundle::random(3, 5);
  save_bundle(b, path);
  EXPECT_EQ(load_bundle(path).w_hv, b.w_hv);
  std::filesystem::remove(path);
}

TEST(BundleFile, Malformed) {
  EXPECT_THROW(bundle_from_json("not json"), ContractViolation);
  EXPECT_THROW(bundle_from_json(R"({"format":"lihe-bundle","v":1,"D":2})"), ContractViolation);
  auto j = nlohmann::json::parse(bundle_to_json(ProjectionBundle::identity(2)));
  j["w_ht"] = {1.0, 2.0};
  EXPECT_THROW(bundle_from_json(j.dump()), ContractViolation);
  j = nlohmann::json::parse(bundle_to_json(ProjectionBundle::identity(2)));
  j["layout"] = "column-major";
  EXPECT_THROW(bundle_from_json(j.dump()), ContractViolation);
  EXPECT_THROW(load_bundle("/nonexistent/weights.json"), std::runtime_error);
}

}  // namespace
}  // namespace lihe
