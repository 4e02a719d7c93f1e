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

#include "lihe/contrastive.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lihe/checks.h"
#include "lihe/errors.h"

namespace lihe {
namespace {

Vec random_vec(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0, scale);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
  return v;
}

GroundingBatch random_batch(std::mt19937_64& rng, Eigen::Index d, int images, int anchors) {
  GroundingBatch b;
  for (int i = 0; i < images; ++i) {
    ImageRecord img;
    for (int a = 0; a < anchors; ++a) img.anchors.push_back(random_vec(rng, d));
    img.text = random_vec(rng, d);
    b.images.push_back(img);
  }
  return b;
}

// Direct evaluation of the objective in long double without max subtraction.
double naive_loss(const GroundingBatch& batch, const ProjectionBundle& bundle, bool intra) {
  long double total = 0;
  for (std::size_t i = 0; i < batch.images.size(); ++i) {
    const Vec& t = batch.images[i].text;
    const long double pos = hemix(batch.images[i].anchors[0], t, bundle) / bundle.tau;
    long double denom = 0;
    for (std::size_t j = 0; j < batch.images.size(); ++j) {
      for (std::size_t n = 0; n < batch.images[j].anchors.size(); ++n) {
        if (i == j && n != 0 && !intra) continue;
        denom += std::exp(static_cast<long double>(hemix(batch.images[j].anchors[n], t, bundle)) /
                          bundle.tau);
      }
    }
    total += -(pos - std::log(denom));
  }
  return static_cast<double>(total / batch.images.size());
}

TEST(ContrastiveLoss, SinglePositiveIsZero) {
  GroundingBatch b;
  b.images.push_back({{Vec::Ones(3)}, Vec::Constant(3, 0.5)});
  const LossReport r = contrastive_loss(b, ProjectionBundle::random(3, 1));
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_LE(r.grads.max_abs(), 1e-12);
}

TEST(ContrastiveLoss, TwoImagesEqualScoresGiveLog2) {
  GroundingBatch b;
  b.images.push_back({{Vec::Ones(2)}, Vec::Ones(2)});
  b.images.push_back({{Vec::Ones(2)}, Vec::Ones(2)});
  EXPECT_NEAR(contrastive_loss(b, ProjectionBundle::identity(2)).loss, std::log(2.0), 1e-15);
}

TEST(ContrastiveLoss, IntraNegativesEqualScoresGiveLog3) {
  GroundingBatch b;
  b.images.push_back({{Vec::Ones(2), Vec::Ones(2), Vec::Ones(2)}, Vec::Ones(2)});
  EXPECT_NEAR(contrastive_loss(b, ProjectionBundle::identity(2), true).loss, std::log(3.0), 1e-15);
}

TEST(ContrastiveLoss, PrintedIndicatorIgnoresOwnNegatives) {
  std::mt19937_64 rng(4);
  const GroundingBatch b = random_batch(rng, 5, 1, 4);
  const ProjectionBundle bundle = ProjectionBundle::random(5, 2);
  EXPECT_EQ(contrastive_loss(b, bundle, false).loss, 0.0);
  EXPECT_GT(contrastive_loss(b, bundle, true).loss, 0.0);
}

TEST(ContrastiveLoss, MatchesNaiveOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const GroundingBatch b = random_batch(rng, 6, 1 + trial % 4, 1 + trial % 3);
    ProjectionBundle bundle = ProjectionBundle::random(6, trial, 0.3, 0.5, 1.2);
    bundle.embed_mode = trial % 2 ? EmbedMode::kExpMap : EmbedMode::kLift;
    for (bool intra : {false, true}) {
      const double want = naive_loss(b, bundle, intra);
      EXPECT_NEAR(contrastive_loss(b, bundle, intra).loss, want, 1e-12 * std::max(1.0, want));
    }
  }
}

TEST(ContrastiveLoss, NonNegative) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const GroundingBatch b = random_batch(rng, 4, 3, 3);
    EXPECT_GE(contrastive_loss(b, ProjectionBundle::random(4, trial), trial % 2 == 0).loss, 0.0);
  }
}

TEST(ContrastiveLoss, LargeScoresStayFinite) {
  std::mt19937_64 rng(14);
  GroundingBatch b = random_batch(rng, 4, 3, 3);
  for (auto& img : b.images) {
    img.text *= 1e3;
    for (auto& a : img.anchors) a *= 1e3;
  }
  const LossReport r = contrastive_loss(b, ProjectionBundle::random(4, 1, 0.5, 0.01), true);
  EXPECT_TRUE(std::isfinite(r.loss));
  EXPECT_TRUE(r.grads.all_finite());
}

TEST(ContrastiveLoss, TemperatureRescaling) {
  std::mt19937_64 rng(15);
  const GroundingBatch b = random_batch(rng, 4, 3, 2);
  ProjectionBundle bundle = ProjectionBundle::random(4, 5, 0.5, 2.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < b.images.size(); ++i) {
    std::vector<double> row = {hemix(b.images[i].anchors[0], b.images[i].text, bundle) / 2.0};
    for (std::size_t j = 0; j < b.images.size(); ++j) {
      if (j == i) continue;
      for (const auto& a : b.images[j].anchors) row.push_back(hemix(a, b.images[i].text, bundle) / 2.0);
    }
    rows.push_back(row);
  }
  EXPECT_NEAR(contrastive_loss(b, bundle).loss, info_nce_from_scores(rows, 1.0), 1e-12);
}

TEST(ContrastiveLoss, ShiftInvariancePerImage) {
  std::mt19937_64 rng(16);
  const GroundingBatch b = random_batch(rng, 5, 3, 3);
  const ProjectionBundle bundle = ProjectionBundle::random(5, 6, 0.5, 0.3);
  LossOptions plain;
  plain.intra_negatives = true;
  LossOptions shifted = plain;
  shifted.score_offsets = {3.7, -120.0, 0.25};
  const LossReport a = contrastive_loss(b, bundle, plain);
  const LossReport c = contrastive_loss(b, bundle, shifted);
  EXPECT_NEAR(a.loss, c.loss, 1e-12);
  EXPECT_NEAR((a.grads.w_ev - c.grads.w_ev).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(ContrastiveLoss, EuclideanOnlyLeavesHyperbolicGradientsZero) {
  std::mt19937_64 rng(17);
  const GroundingBatch b = random_batch(rng, 4, 3, 3);
  ProjectionBundle bundle = ProjectionBundle::random(4, 7);
  bundle.alpha = 0.0;
  const LossReport r = contrastive_loss(b, bundle, true);
  EXPECT_EQ(r.grads.w_hv.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.grads.w_ht.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(r.grads.w_ev.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ContrastiveLoss, Errors) {
  const ProjectionBundle bundle = ProjectionBundle::identity(2);
  EXPECT_THROW(contrastive_loss(GroundingBatch{}, bundle), DomainError);
  GroundingBatch no_anchor;
  no_anchor.images.push_back({{}, Vec::Ones(2)});
  EXPECT_THROW(contrastive_loss(no_anchor, bundle), DomainError);
  GroundingBatch wrong_dim;
  wrong_dim.images.push_back({{Vec::Ones(3)}, Vec::Ones(2)});
  EXPECT_THROW(contrastive_loss(wrong_dim, bundle), ContractViolation);
  LossOptions bad;
  bad.score_offsets = {1.0, 2.0};
  GroundingBatch one;
  one.images.push_back({{Vec::Ones(2)}, Vec::Ones(2)});
  EXPECT_THROW(contrastive_loss(one, bundle, bad), ContractViolation);
}

TEST(GradientCheck, RandomBatchAtDimFour) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    std::mt19937_64 rng(seed);
    const GroundingBatch b = random_batch(rng, 4, 3, 3);
    ProjectionBundle bundle = ProjectionBundle::random(4, seed, 0.4, 0.5, 1.0);
    bundle.embed_mode = seed % 2 ? EmbedMode::kExpMap : EmbedMode::kLift;
    LossOptions opts;
    opts.intra_negatives = seed % 4 < 2;
    EXPECT_LT(gradient_check(b, bundle, 1e-5, opts), 1e-4) << "seed " << seed;
  }
}

TEST(GradientCheck, ExpMapNearApexUsesSeries) {
  // Tiny projections put every embedding within the series branch.
  std::mt19937_64 rng(21);
  GroundingBatch b = random_batch(rng, 3, 2, 2);
  ProjectionBundle bundle = ProjectionBundle::random(3, 9, 0.6, 0.5, 1.0);
  bundle.embed_mode = EmbedMode::kExpMap;
  bundle.w_hv *= 1e-4;
  bundle.w_ht *= 1e-4;
  EXPECT_LT(gradient_check(b, bundle, 1e-6), 1e-4);
}

TEST(GradientCheck, RandomProblemsFromSuite) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const GradientProblem p = random_gradient_problem(seed, 8);
    EXPECT_LT(gradient_check(p.batch, p.bundle, 1e-5, p.options), 1e-4);
  }
}

TEST(GradientCheck, EpsilonRange) {
  GroundingBatch b;
  b.images.push_back({{Vec::Ones(2)}, Vec::Ones(2)});
  EXPECT_THROW(gradient_check(b, ProjectionBundle::identity(2), 1e-3), DomainError);
  EXPECT_THROW(gradient_check(b, ProjectionBundle::identity(2), 1e-7), DomainError);
}

TEST(InfoNce, UniformRow) {
  EXPECT_NEAR(info_nce_from_scores({{0.3, 0.3, 0.3, 0.3}}, 0.07), std::log(4.0), 1e-14);
  EXPECT_THROW(info_nce_from_scores({}, 1.0), DomainError);
  EXPECT_THROW(info_nce_from_scores({{1.0}}, 0.0), DomainError);
}

TEST(HierarchicalLoss, CoincidentIsZero) {
  const ProjectionBundle b = ProjectionBundle::random(4, 1);
  const Vec f = Vec::Constant(4, 0.3);
  EXPECT_EQ(hierarchical_loss(f, f, f, b), 0.0);
}

TEST(HierarchicalLoss, SumOfGeodesicDistances) {
  std::mt19937_64 rng(22);
  const ProjectionBundle b = ProjectionBundle::random(4, 2, 0.5, 0.07, 1.3);
  const Vec cat = random_vec(rng, 4), base = random_vec(rng, 4), ref = random_vec(rng, 4);
  const CurvedPoint pc = lift(b.w_ht.transpose() * cat, 1.3);
  const CurvedPoint pb = lift(b.w_ht.transpose() * base, 1.3);
  const CurvedPoint pr = lift(b.w_ht.transpose() * ref, 1.3);
  const double want = geodesic_distance(pc, pb) + geodesic_distance(pr, pb);
  EXPECT_NEAR(hierarchical_loss(cat, base, ref, b), want, 1e-12);
  EXPECT_EQ(hierarchical_loss(cat, base, ref, b), hierarchical_loss(ref, base, cat, b));
}

TEST(HierarchicalLoss, DimensionMismatch) {
  const ProjectionBundle b = ProjectionBundle::identity(2);
  EXPECT_THROW(hierarchical_loss(Vec::Ones(2), Vec::Ones(3), Vec::Ones(2), b), ContractViolation);
}

}  // namespace
}  // namespace lihe
