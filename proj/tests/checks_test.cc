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

#include "lihe/checks.h"

#include <gtest/gtest.h>

namespace lihe {
namespace {

TEST(GeometrySuite, AllPropertiesPass) {
  const std::vector<PropertyResult> results = run_geometry_suite(200, 42);
  ASSERT_EQ(results.size(), 5u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
    EXPECT_EQ(r.failures, 0) << r.name;
    EXPECT_GT(r.cases, 0) << r.name;
  }
}

TEST(GeometrySuite, SeededAndReportable) {
  const auto a = run_geometry_suite(20, 7);
  const auto b = run_geometry_suite(20, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].worst, b[i].worst);
    const auto j = a[i].to_json();
    EXPECT_EQ(j.at("name"), a[i].name);
    EXPECT_EQ(j.at("passed"), a[i].passed);
  }
}

TEST(GradientSuite, Passes) {
  const PropertyResult r = run_gradient_suite(10, 3, 1e-5, 1e-4, 8);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_EQ(r.cases, 10);
  EXPECT_LT(r.worst, 1e-4);
}

TEST(GradientSuite, ImpossibleToleranceFails) {
  const PropertyResult r = run_gradient_suite(3, 3, 1e-5, 0.0, 4);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.failures, 0);
}

TEST(RandomProblem, RespectsBounds) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const GradientProblem p = random_gradient_problem(s, 6);
    EXPECT_LE(p.bundle.dim(), 6);
    EXPECT_GE(p.bundle.dim(), 2);
    EXPECT_GE(p.batch.images.size(), 1u);
    EXPECT_LE(p.batch.images.size(), 4u);
    EXPECT_GT(p.bundle.alpha, 0.0);
    EXPECT_LT(p.bundle.alpha, 1.0);
  }
}

}  // namespace
}  // namespace lihe
