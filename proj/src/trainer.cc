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

#include "lihe/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lihe/errors.h"
#include "lihe/grounding.h"

namespace lihe {

SyntheticHierarchy SyntheticHierarchy::make(int num_parents, int children_per_parent,
                                            Eigen::Index feature_dim, std::uint64_t seed) {
  SyntheticHierarchy h;
  h.feature_dim = feature_dim;
  h.seed = seed;
  int next = num_parents;
  for (int p = 0; p < num_parents; ++p) {
    h.parents.push_back(p);
    for (int c = 0; c < children_per_parent; ++c) h.children[p].push_back(next++);
  }
  h.validate();
  return h;
}

std::vector<int> SyntheticHierarchy::all_children() const {
  std::vector<int> out;
  for (int p : parents) {
    const auto it = children.find(p);
    if (it != children.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

int SyntheticHierarchy::parent_of(int child) const {
  for (const auto& [p, kids] : children) {
    if (std::find(kids.begin(), kids.end(), child) != kids.end()) return p;
  }
  throw DomainError("concept " + std::to_string(child) + " is not a child");
}

void SyntheticHierarchy::validate() const {
  if (parents.empty()) throw DomainError("hierarchy has no parents");
  if (feature_dim < 1) throw DomainError("hierarchy feature_dim must be >= 1");
  std::map<int, int> owner;
  for (int p : parents) {
    const auto it = children.find(p);
    if (it == children.end() || it->second.size() < 2) {
      throw DomainError("parent " + std::to_string(p) + " needs at least two children");
    }
    for (int c : it->second) {
      if (!owner.emplace(c, p).second) {
        throw DomainError("child " + std::to_string(c) + " has more than one parent");
      }
    }
  }
  for (const auto& [p, kids] : children) {
    if (std::find(parents.begin(), parents.end(), p) == parents.end()) {
      throw DomainError("children listed under unknown parent " + std::to_string(p));
    }
  }
}

std::map<int, Vec> concept_descriptors(const SyntheticHierarchy& h) {
  h.validate();
  std::mt19937_64 rng(h.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index d = h.feature_dim;
  const auto gaussian = [&] {
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
    return v;
  };
  std::map<int, Vec> out;
  for (int p : h.parents) {
    const Vec dir = gaussian();
    out[p] = dir.normalized();
  }
  for (int p : h.parents) {
    for (int c : h.children.at(p)) {
      const Vec offset = gaussian() / std::sqrt(static_cast<double>(d));
      out[c] = (out[p] + h.child_spread * offset).normalized();
    }
  }
  return out;
}

SyntheticDataset generate_dataset(const SyntheticHierarchy& h, int n_samples,
                                  int negatives_per_image, std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("generate_dataset: need at least one sample");
  if (negatives_per_image < 0) throw DomainError("generate_dataset: negatives must be >= 0");
  const std::map<int, Vec> desc = concept_descriptors(h);
  const std::vector<int> kids = h.all_children();
  const Eigen::Index d = h.feature_dim;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_child(0, kids.size() - 1);
  std::bernoulli_distribution coin(0.5);
  const auto noisy = [&](const Vec& centre) {
    Vec v = centre;
    if (h.noise_scale > 0.0) {
      for (Eigen::Index i = 0; i < d; ++i) v(i) += h.noise_scale * normal(rng);
    }
    return v;
  };

  SyntheticDataset out;
  for (int s = 0; s < n_samples; ++s) {
    SampleMeta meta;
    meta.child = kids[pick_child(rng)];
    meta.general_phrase = coin(rng);
    const int parent = h.parent_of(meta.child);

    ImageRecord img;
    img.anchors.push_back(noisy(desc.at(meta.child)));
    meta.anchor_concepts.push_back(meta.child);
    img.text = noisy(desc.at(meta.general_phrase ? parent : meta.child));

    std::vector<int> pool;
    for (int c : kids) {
      if (c == meta.child) continue;
      if (meta.general_phrase && h.parent_of(c) == parent) continue;
      pool.push_back(c);
    }
    if (pool.empty()) {
      for (int c : kids) {
        if (c != meta.child) pool.push_back(c);
      }
    }
    if (!pool.empty()) {
      std::shuffle(pool.begin(), pool.end(), rng);
      for (int n = 0; n < negatives_per_image; ++n) {
        const int neg = pool[static_cast<std::size_t>(n) % pool.size()];
        img.anchors.push_back(noisy(desc.at(neg)));
        meta.anchor_concepts.push_back(neg);
      }
    }
    out.batch.images.push_back(std::move(img));
    out.meta.push_back(meta);
  }
  return out;
}

void TrainConfig::validate() const {
  if (steps < 1) throw DomainError("train: steps must be >= 1");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw DomainError("train: lr must be >= 0");
  if (batch_images < 1) throw DomainError("train: batch_images must be >= 1");
  if (negatives_per_image < 0) throw DomainError("train: negatives_per_image must be >= 0");
}

AdamOptimizer::AdamOptimizer(Eigen::Index dim, double lr, double beta1, double beta2,
                             double eps, double weight_decay)
    : lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      weight_decay_(weight_decay),
      m_(BundleGradients::zeros(dim)),
      v_(BundleGradients::zeros(dim)) {}

void AdamOptimizer::update(Mat& w, const Mat& g, Mat& m, Mat& v) const {
  m = beta1_ * m + (1.0 - beta1_) * g;
  v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const Mat step = (m / c1).array() / ((v / c2).array().sqrt() + eps_);
  if (weight_decay_ != 0.0) w -= lr_ * weight_decay_ * w;
  w -= lr_ * step;
}

void AdamOptimizer::step(ProjectionBundle& bundle, const BundleGradients& grads) {
  ++t_;
  update(bundle.w_ev, grads.w_ev, m_.w_ev, v_.w_ev);
  update(bundle.w_et, grads.w_et, m_.w_et, v_.w_et);
  update(bundle.w_hv, grads.w_hv, m_.w_hv, v_.w_hv);
  update(bundle.w_ht, grads.w_ht, m_.w_ht, v_.w_ht);
}

ProjectionBundle initial_bundle(Eigen::Index dim, const TrainConfig& cfg) {
  return ProjectionBundle::random(dim, cfg.seed, cfg.alpha, cfg.tau, cfg.kappa);
}

TrainResult train(const GroundingBatch& data, const TrainConfig& cfg) {
  if (data.images.empty()) throw DomainError("train: empty dataset");
  const Eigen::Index dim = data.images.front().text.size();
  ProjectionBundle start = initial_bundle(dim, cfg);
  return train(data, cfg, std::move(start));
}

TrainResult train(const GroundingBatch& data, const TrainConfig& cfg, ProjectionBundle start) {
  cfg.validate();
  if (data.images.empty()) throw DomainError("train: empty dataset");
  start.validate(/*allow_endpoint_alpha=*/true);
  for (const auto& img : data.images) {
    bool finite = img.text.allFinite();
    for (const auto& a : img.anchors) finite = finite && a.allFinite();
    if (!finite) throw DomainError("train: non-finite feature in training data");
  }

  TrainResult result;
  result.bundle = std::move(start);
  ProjectionBundle& bundle = result.bundle;
  AdamOptimizer adam(bundle.dim(), cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps,
                     cfg.weight_decay);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.images.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  const std::size_t per_batch =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_images), order.size());

  LossOptions opts;
  opts.intra_negatives = cfg.intra_negatives;
  GroundingBatch mini;
  for (int step = 0; step < cfg.steps; ++step) {
    mini.images.clear();
    while (mini.images.size() < per_batch) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      mini.images.push_back(data.images[order[cursor++]]);
    }
    LossReport report;
    try {
      report = contrastive_loss(mini, bundle, opts);
    } catch (const DomainError&) {
      // Inputs are finite, so a non-finite score comes from the weights.
      throw TrainingDiverged(step, std::numeric_limits<double>::quiet_NaN());
    }
    if (!std::isfinite(report.loss) || !report.grads.all_finite()) {
      throw TrainingDiverged(step, report.loss);
    }
    result.loss_trace.push_back(report.loss);
    if (cfg.optimizer == OptimizerKind::kAdam) {
      adam.step(bundle, report.grads);
    } else {
      bundle.w_ev -= cfg.lr * report.grads.w_ev;
      bundle.w_et -= cfg.lr * report.grads.w_et;
      bundle.w_hv -= cfg.lr * report.grads.w_hv;
      bundle.w_ht -= cfg.lr * report.grads.w_ht;
    }
  }
  return result;
}

double selection_accuracy(const GroundingBatch& data, const ProjectionBundle& bundle) {
  if (data.images.empty()) throw DomainError("selection_accuracy: empty dataset");
  std::size_t hits = 0;
  std::vector<AnchorRecord> anchors;
  for (const auto& img : data.images) {
    anchors.clear();
    for (const auto& a : img.anchors) anchors.push_back(AnchorRecord{a, 1.0, Box{0, 0, 1, 1}});
    if (select_anchor(img.text, anchors, bundle) == 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.images.size());
}

ApexReport apex_report(const ProjectionBundle& bundle, const SyntheticHierarchy& h) {
  return apex_report(bundle, h, concept_descriptors(h));
}

ApexReport apex_report(const ProjectionBundle& bundle, const SyntheticHierarchy& h,
                       const std::map<int, Vec>& descriptors) {
  ApexReport r;
  double parent_sum = 0.0;
  double child_sum = 0.0;
  std::size_t child_count = 0;
  for (int p : h.parents) {
    const double n = (bundle.w_ht.transpose() * descriptors.at(p)).norm();
    r.norms[p] = n;
    parent_sum += n;
  }
  for (int c : h.all_children()) {
    const double n = (bundle.w_ht.transpose() * descriptors.at(c)).norm();
    r.norms[c] = n;
    child_sum += n;
    ++child_count;
  }
  r.parent_mean = parent_sum / static_cast<double>(h.parents.size());
  r.child_mean = child_count ? child_sum / static_cast<double>(child_count) : 0.0;
  if (r.child_mean > 0.0) r.ratio = r.parent_mean / r.child_mean;
  return r;
}

nlohmann::json ApexReport::to_json() const {
  nlohmann::json j;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [id, n] : norms) per[std::to_string(id)] = n;
  j["norms"] = per;
  j["parent_mean"] = parent_mean;
  j["child_mean"] = child_mean;
  j["ratio"] = ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr);
  return j;
}

double mean_batch_loss(const GroundingBatch& data, const ProjectionBundle& bundle,
                       int batch_images, const LossOptions& options) {
  if (data.images.empty()) throw DomainError("mean_batch_loss: empty dataset");
  if (batch_images < 1) throw DomainError("mean_batch_loss: batch_images must be >= 1");
  LossOptions opts = options;
  opts.compute_gradients = false;
  const std::size_t step = static_cast<std::size_t>(batch_images);
  double total = 0.0;
  GroundingBatch chunk;
  for (std::size_t begin = 0; begin < data.images.size(); begin += step) {
    const std::size_t end = std::min(begin + step, data.images.size());
    chunk.images.assign(data.images.begin() + static_cast<std::ptrdiff_t>(begin),
                        data.images.begin() + static_cast<std::ptrdiff_t>(end));
    total += contrastive_loss(chunk, bundle, opts).loss * static_cast<double>(end - begin);
  }
  return total / static_cast<double>(data.images.size());
}

ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& cfg) {
  SyntheticHierarchy h =
      SyntheticHierarchy::make(cfg.parents, cfg.children_per_parent, cfg.dim, cfg.train.seed);
  h.noise_scale = cfg.noise_scale;
  const SyntheticDataset train_set =
      generate_dataset(h, cfg.train_samples, cfg.train.negatives_per_image, cfg.train.seed + 1);
  const SyntheticDataset eval_set =
      generate_dataset(h, cfg.eval_samples, cfg.train.negatives_per_image, cfg.train.seed + 2);

  LossOptions opts;
  opts.intra_negatives = cfg.train.intra_negatives;
  opts.compute_gradients = false;

  ToyExperimentResult out;
  const ProjectionBundle start = initial_bundle(cfg.dim, cfg.train);
  const int b = cfg.train.batch_images;
  out.initial_loss = mean_batch_loss(train_set.batch, start, b, opts);
  out.initial_full_loss = contrastive_loss(train_set.batch, start, opts).loss;
  out.trained = train(train_set.batch, cfg.train, start);
  out.final_loss = mean_batch_loss(train_set.batch, out.trained.bundle, b, opts);
  out.final_full_loss = contrastive_loss(train_set.batch, out.trained.bundle, opts).loss;
  out.accuracy = selection_accuracy(eval_set.batch, out.trained.bundle);
  out.apex = apex_report(out.trained.bundle, h);
  return out;
}

GroundingBatch batch_from_records(const std::vector<nlohmann::json>& records,
                                  std::size_t* skipped) {
  GroundingBatch batch;
  std::size_t dropped = 0;
  const auto to_vec = [](const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Vec(Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size())));
  };
  for (const auto& r : records) {
    if (r.value("valid", 1) == 0) {
      ++dropped;
      continue;
    }
    ImageRecord img;
    for (const auto& a : r.at("anchors")) img.anchors.push_back(to_vec(a));
    img.text = to_vec(r.at("text"));
    if (img.anchors.empty()) throw DomainError("training record without anchors");
    batch.images.push_back(std::move(img));
  }
  if (skipped) *skipped = dropped;
  return batch;
}

}  // namespace lihe
