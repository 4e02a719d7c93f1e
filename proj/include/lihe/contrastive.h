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

#include <cstddef>
#include <vector>

#include "lihe/hemix.h"

namespace lihe {

// One image's worth of supervision: anchors[0] is the positive anchor for
// `text`, the remaining anchors are negatives.
struct ImageRecord {
  std::vector<Vec> anchors;
  Vec text;
};

struct GroundingBatch {
  std::vector<ImageRecord> images;
};

// Gradients with respect to the four projection matrices.
struct BundleGradients {
  Mat w_ev;
  Mat w_et;
  Mat w_hv;
  Mat w_ht;

  static BundleGradients zeros(Eigen::Index dim);
  double max_abs() const;
  bool all_finite() const;
};

struct LossReport {
  double loss = 0.0;
  BundleGradients grads;
};

struct LossOptions {
  // false: the denominator for image i holds its own positive plus every
  // anchor of every other image. true: image i's own negatives join too.
  bool intra_negatives = false;
  bool compute_gradients = true;
  // Test hook: when non-empty, score_offsets[i] is added to every score in
  // image i's term set. Must have one entry per image.
  std::vector<double> score_offsets;
};

// Mean over images of -log softmax(positive) with temperature bundle.tau.
// Throws DomainError for an empty batch.
LossReport contrastive_loss(const GroundingBatch& batch, const ProjectionBundle& bundle,
                            const LossOptions& options = {});
LossReport contrastive_loss(const GroundingBatch& batch, const ProjectionBundle& bundle,
                            bool intra_negatives);

// The same reduction applied to precomputed scores: rows[i][0] is image i's
// positive term, the rest of the row is its denominator set.
double info_nce_from_scores(const std::vector<std::vector<double>>& rows, double tau);

// d(cat, base_ref) + d(ref, base_ref) with every text embedded through W_HT.
double hierarchical_loss(const Vec& f_cat, const Vec& f_base_ref, const Vec& f_ref,
                         const ProjectionBundle& bundle);

// Central finite differences over every projection entry compared against
// the analytic gradients. Returns the max of |a - n| / max(|a|, |n|, 1e-8).
// epsilon must lie in [1e-6, 1e-4].
double gradient_check(const GroundingBatch& batch, const ProjectionBundle& bundle,
                      double epsilon, const LossOptions& options = {});

}  // namespace lihe
