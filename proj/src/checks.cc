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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lihe/lorentz.h"

namespace lihe {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec gaussian(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// Uniform direction, radius uniform in [0, max_norm].
Vec random_ball(Rng& rng, Eigen::Index n, double max_norm) {
  Vec v = gaussian(rng, n);
  const double norm = v.norm();
  if (norm == 0.0) return v;
  return v / norm * uniform(rng, 0.0, max_norm);
}

// Tangent vector at p with Lorentz norm uniform in [0, max_norm].
TangentVector random_tangent(Rng& rng, const CurvedPoint& p, double max_norm) {
  TangentVector v = tangent_project(p, gaussian(rng, p.dim() + 1));
  const double n = tangent_norm(v);
  const double target = uniform(rng, 0.0, max_norm);
  const double scale = n > 0.0 ? target / n : 0.0;
  v.time *= scale;
  v.spatial *= scale;
  return v;
}

void record(PropertyResult& r, bool ok, double violation) {
  ++r.cases;
  if (!ok) ++r.failures;
  r.worst = std::max(r.worst, violation);
}

void finish(PropertyResult& r) { r.passed = r.failures == 0; }

PropertyResult closure(Rng& rng, int cases) {
  PropertyResult r;
  r.name = "hyperboloid_closure";
  for (int i = 0; i < cases; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 16)(rng);
    const double kappa = uniform(rng, 0.25, 4.0);
    const Vec z = random_ball(rng, n, 10.0);
    const CurvedPoint p = lift(z, kappa);
    const double tol = 1e-8 * std::max(1.0, z.squaredNorm());
    const double err = std::abs(lorentz_inner(p, p) + 1.0 / kappa);
    record(r, is_on_hyperboloid(p, tol), err / tol);
  }
  r.detail = "worst |<x,x>+1/k| / tol";
  finish(r);
  return r;
}

PropertyResult exp_log_inverse(Rng& rng, int cases) {
  PropertyResult r;
  r.name = "exp_log_inverse";
  for (int i = 0; i < cases; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 16)(rng);
    const double kappa = uniform(rng, 0.25, 4.0);
    const CurvedPoint p = lift(random_ball(rng, n, 3.0), kappa);
    const TangentVector v = random_tangent(rng, p, 5.0);
    const TangentVector back = log_map(p, exp_map(p, v));
    const double v_norm = v.ambient().norm();
    const double err = (back.ambient() - v.ambient()).norm() / (1.0 + v_norm);
    record(r, err <= 1e-6, err);
  }
  r.detail = "worst |log(exp(v)) - v| / (1 + |v|)";
  finish(r);
  return r;
}

PropertyResult metric_axioms(Rng& rng, int cases) {
  PropertyResult r;
  r.name = "distance_metric_axioms";
  for (int i = 0; i < cases; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 16)(rng);
    const double kappa = uniform(rng, 0.25, 4.0);
    const CurvedPoint a = lift(random_ball(rng, n, 3.0), kappa);
    const CurvedPoint b = lift(random_ball(rng, n, 3.0), kappa);
    const CurvedPoint c = lift(random_ball(rng, n, 3.0), kappa);
    const double ab = geodesic_distance(a, b);
    const double bc = geodesic_distance(b, c);
    const double ac = geodesic_distance(a, c);
    const bool symmetric = ab == geodesic_distance(b, a);
    const bool identity = geodesic_distance(a, a) == 0.0;
    const double excess = ac - (ab + bc);
    record(r, symmetric && identity && excess <= 1e-8 && ab >= 0.0, std::max(excess, 0.0));
  }
  r.detail = "worst triangle excess d(a,c) - d(a,b) - d(b,c)";
  finish(r);
  return r;
}

PropertyResult monotonicity(Rng& rng, int cases) {
  PropertyResult r;
  r.name = "distance_monotone_in_inner_product";
  for (int i = 0; i < cases; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 16)(rng);
    const double kappa = uniform(rng, 0.25, 4.0);
    const CurvedPoint x = lift(random_ball(rng, n, 3.0), kappa);
    const CurvedPoint y1 = lift(random_ball(rng, n, 3.0), kappa);
    const CurvedPoint y2 = lift(random_ball(rng, n, 3.0), kappa);
    const double i1 = lorentz_inner(x, y1);
    const double i2 = lorentz_inner(x, y2);
    const double d1 = geodesic_distance(x, y1);
    const double d2 = geodesic_distance(x, y2);
    bool ok = true;
    if (i1 > i2) ok = d1 < d2;
    if (i2 > i1) ok = d2 < d1;
    record(r, ok, ok ? 0.0 : 1.0);
  }
  r.detail = "count of pairs ordered the wrong way";
  finish(r);
  return r;
}

// At large kappa, compare sqrt(kappa) * d against an extended-precision
// evaluation of the same closed form.
PropertyResult curvature_scaling(Rng& rng, int cases) {
  PropertyResult r;
  r.name = "large_curvature_regression";
  const double kappa = 1e6;
  for (int i = 0; i < cases; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 8)(rng);
    const Vec z1 = random_ball(rng, n, 2.0);
    const Vec z2 = random_ball(rng, n, 2.0);
    const double got = geodesic_distance(lift(z1, kappa), lift(z2, kappa)) * std::sqrt(kappa);
    long double n1 = 0, n2 = 0, dot = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      n1 += static_cast<long double>(z1(k)) * z1(k);
      n2 += static_cast<long double>(z2(k)) * z2(k);
      dot += static_cast<long double>(z1(k)) * z2(k);
    }
    const long double k = kappa;
    const long double t1 = std::sqrt(n1 + 1.0L / k);
    const long double t2 = std::sqrt(n2 + 1.0L / k);
    const long double arg = std::max(1.0L, k * (t1 * t2 - dot));
    const double want = static_cast<double>(std::acosh(arg));
    const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
    record(r, rel <= 1e-6, rel);
  }
  r.detail = "worst relative deviation from extended-precision closed form at kappa=1e6";
  finish(r);
  return r;
}

}  // namespace

nlohmann::json PropertyResult::to_json() const {
  return {{"name", name},   {"passed", passed}, {"cases", cases},
          {"failures", failures}, {"worst", worst},  {"detail", detail}};
}

std::vector<PropertyResult> run_geometry_suite(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PropertyResult> out;
  out.push_back(closure(rng, cases));
  out.push_back(exp_log_inverse(rng, cases));
  out.push_back(metric_axioms(rng, cases));
  out.push_back(monotonicity(rng, cases));
  out.push_back(curvature_scaling(rng, cases));
  return out;
}

GradientProblem random_gradient_problem(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  GradientProblem prob;
  const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(2, max_dim)(rng);
  const int images = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < images; ++i) {
    ImageRecord img;
    const int anchors = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int a = 0; a < anchors; ++a) img.anchors.push_back(gaussian(rng, d));
    img.text = gaussian(rng, d);
    prob.batch.images.push_back(std::move(img));
  }
  const double alpha = uniform(rng, 0.05, 0.95);
  const double tau = uniform(rng, 0.2, 1.0);
  const double kappa = uniform(rng, 0.5, 2.0);
  prob.bundle = ProjectionBundle::random(d, rng(), alpha, tau, kappa);
  prob.bundle.embed_mode = std::bernoulli_distribution(0.5)(rng) ? EmbedMode::kExpMap
                                                                  : EmbedMode::kLift;
  prob.options.intra_negatives = std::bernoulli_distribution(0.5)(rng);
  return prob;
}

PropertyResult run_gradient_suite(int batches, std::uint64_t seed, double epsilon,
                                  double tolerance, int max_dim) {
  PropertyResult r;
  r.name = "analytic_vs_finite_difference";
  Rng rng(seed);
  for (int b = 0; b < batches; ++b) {
    const GradientProblem prob = random_gradient_problem(rng(), max_dim);
    const double err = gradient_check(prob.batch, prob.bundle, epsilon, prob.options);
    record(r, err < tolerance, err);
  }
  std::ostringstream detail;
  detail << "worst max relative error, epsilon=" << epsilon << ", tolerance=" << tolerance;
  r.detail = detail.str();
  finish(r);
  return r;
}

}  // namespace lihe
