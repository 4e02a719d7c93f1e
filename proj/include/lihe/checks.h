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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lihe/contrastive.h"

namespace lihe {

struct PropertyResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed violation (property-specific units)
  std::string detail;

  nlohmann::json to_json() const;
};

// Hyperboloid closure, exp/log inverse, metric axioms, monotonicity of the
// distance in the Lorentzian product, and a large-curvature regression, each
// over `cases` seeded random draws.
std::vector<PropertyResult> run_geometry_suite(int cases, std::uint64_t seed);

// A random contrastive-loss problem with D <= max_dim, at most 4 images and
// 4 anchors per image, random alpha/tau/kappa and embedding mode.
struct GradientProblem {
  GroundingBatch batch;
  ProjectionBundle bundle;
  LossOptions options;
};
GradientProblem random_gradient_problem(std::uint64_t seed, int max_dim = 16);

// gradient_check over `batches` random problems; passes when every max
// relative error is below `tolerance`.
PropertyResult run_gradient_suite(int batches, std::uint64_t seed, double epsilon = 1e-5,
                                  double tolerance = 1e-4, int max_dim = 16);

}  // namespace lihe
