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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lihe/contrastive.h"
#include "lihe/hemix.h"

namespace lihe {

// Two-level concept tree used to probe whether training places general
// concepts nearer the apex than specific ones. Parents get ids
// 0..num_parents-1, children follow.
struct SyntheticHierarchy {
  std::vector<int> parents;
  std::map<int, std::vector<int>> children;
  Eigen::Index feature_dim = 8;
  double noise_scale = 0.05;
  // Scale of each child's offset from its parent before normalisation.
  double child_spread = 1.0;
  std::uint64_t seed = 42;

  static SyntheticHierarchy make(int num_parents = 3, int children_per_parent = 3,
                                 Eigen::Index feature_dim = 8, std::uint64_t seed = 42);

  std::vector<int> all_children() const;
  int parent_of(int child) const;
  // Throws DomainError unless every parent has >= 2 children and every
  // child has exactly one parent.
  void validate() const;
};

// Unit-norm descriptor per concept: parents are random directions, a child
// is normalize(parent + child_spread * offset). Deterministic in h.seed.
std::map<int, Vec> concept_descriptors(const SyntheticHierarchy& h);

struct SampleMeta {
  int child = -1;
  bool general_phrase = false;  // text describes the parent concept
  std::vector<int> anchor_concepts;  // concept id of each anchor, positive first
};

struct SyntheticDataset {
  GroundingBatch batch;  // anchors[0] is the positive, then the negatives
  std::vector<SampleMeta> meta;
};

// Each sample draws a child; the positive anchor is the child descriptor
// plus noise, the text is the child descriptor or (with probability 0.5)
// the parent descriptor, plus noise. Negatives are other children: any
// child for specific phrases, only non-siblings for general phrases (a
// sibling would also match the parent phrase).
SyntheticDataset generate_dataset(const SyntheticHierarchy& h, int n_samples,
                                  int negatives_per_image, std::uint64_t seed);

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  int steps = 500;
  double lr = 0.01;
  // Small on purpose: with 9 toy concepts, larger batches put many
  // same-concept anchors in each denominator and the loss floor rises.
  int batch_images = 4;
  int negatives_per_image = 2;
  double alpha = kDefaultAlpha;
  double tau = kDefaultTau;
  double kappa = kDefaultKappa;
  bool intra_negatives = false;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.0;  // decoupled, applied only by the Adam variant
  std::uint64_t seed = 42;

  void validate() const;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(int step, double loss)
      : std::runtime_error("training diverged at step " + std::to_string(step) +
                           " (loss " + std::to_string(loss) + ")"),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct TrainResult {
  ProjectionBundle bundle;
  std::vector<double> loss_trace;  // minibatch loss before each update
};

// Adam with bias correction and optional decoupled weight decay.
class AdamOptimizer {
 public:
  AdamOptimizer(Eigen::Index dim, double lr, double beta1, double beta2, double eps,
                double weight_decay);
  void step(ProjectionBundle& bundle, const BundleGradients& grads);

 private:
  void update(Mat& w, const Mat& g, Mat& m, Mat& v) const;

  double lr_, beta1_, beta2_, eps_, weight_decay_;
  long t_ = 0;
  BundleGradients m_, v_;
};

// Initial bundle: ProjectionBundle::random(D, cfg.seed, cfg.alpha, ...).
ProjectionBundle initial_bundle(Eigen::Index dim, const TrainConfig& cfg);

// Minibatches of cfg.batch_images drawn from a seeded per-epoch shuffle.
TrainResult train(const GroundingBatch& data, const TrainConfig& cfg);
TrainResult train(const GroundingBatch& data, const TrainConfig& cfg, ProjectionBundle start);

// Fraction of images whose positive anchor (index 0) wins select_anchor.
double selection_accuracy(const GroundingBatch& data, const ProjectionBundle& bundle);

struct ApexReport {
  std::map<int, double> norms;  // |z| of each concept under W_HT
  double parent_mean = 0.0;
  double child_mean = 0.0;
  std::optional<double> ratio;  // parent_mean / child_mean; empty when child_mean == 0

  nlohmann::json to_json() const;
};

ApexReport apex_report(const ProjectionBundle& bundle, const SyntheticHierarchy& h);
ApexReport apex_report(const ProjectionBundle& bundle, const SyntheticHierarchy& h,
                       const std::map<int, Vec>& descriptors);

// Mean over images of the loss each image gets inside consecutive chunks of
// `batch_images` images (the last chunk may be shorter). This is the
// quantity minibatch training minimises; the loss of the whole set as one
// batch has a floor set by same-concept anchors of other images.
double mean_batch_loss(const GroundingBatch& data, const ProjectionBundle& bundle,
                       int batch_images, const LossOptions& options);

// End-to-end toy run: generate train and held-out sets from one hierarchy,
// train, and measure full-set loss before and after plus held-out accuracy.
struct ToyExperimentConfig {
  TrainConfig train;
  int parents = 3;
  int children_per_parent = 3;
  Eigen::Index dim = 8;
  int train_samples = 512;
  int eval_samples = 256;
  double noise_scale = 0.05;
};

struct ToyExperimentResult {
  TrainResult trained;
  double initial_loss = 0.0;  // mean_batch_loss, initial bundle
  double final_loss = 0.0;    // mean_batch_loss, trained bundle
  double initial_full_loss = 0.0;  // whole training set as one batch
  double final_full_loss = 0.0;
  double accuracy = 0.0;      // held-out selection accuracy
  ApexReport apex;
};

// Hierarchy, training set and held-out set use seeds cfg.train.seed,
// +1 and +2.
ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& cfg);

// Training records {"image_id", "valid": 0|1, "anchors": [[...]...], "text": [...]}
// (anchors[0] positive). Records with valid == 0 have no positive anchor and
// are dropped; `skipped` receives their count.
GroundingBatch batch_from_records(const std::vector<nlohmann::json>& records,
                                  std::size_t* skipped = nullptr);

}  // namespace lihe
