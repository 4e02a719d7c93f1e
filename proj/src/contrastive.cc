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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lihe/errors.h"

namespace lihe {
namespace {

// Cached projections of one feature through both branches.
struct Projected {
  Vec f;       // raw feature
  Vec e;       // Euclidean projection f W_E*
  Vec z;       // hyperbolic projection f W_H*
  Vec s;       // spatial coordinates on the sheet
  double x0;   // time coordinate
  double g;    // s = g * z (1 for the lift embedding)
  double dg;   // g'(r) / r, for the exp-map Jacobian
};

Projected project(const Vec& f, const Mat& w_e, const Mat& w_h, double kappa, EmbedMode mode) {
  Projected p;
  p.f = f;
  p.e = w_e.transpose() * f;
  p.z = w_h.transpose() * f;
  if (mode == EmbedMode::kLift) {
    p.g = 1.0;
    p.dg = 0.0;
    p.s = p.z;
  } else {
    const double c = std::sqrt(kappa);
    const double r = p.z.norm();
    const double x = c * r;
    if (x < 1e-3) {
      const double x2 = x * x;
      p.g = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
      p.dg = kappa * (1.0 / 3.0 + x2 / 30.0);
    } else {
      p.g = std::sinh(x) / x;
      p.dg = (x * std::cosh(x) - std::sinh(x)) / (c * r * r * r);
    }
    p.s = p.g * p.z;
  }
  if (!p.s.allFinite()) throw DomainError("contrastive_loss: non-finite hyperbolic embedding");
  p.x0 = std::sqrt(p.s.squaredNorm() + 1.0 / kappa);
  return p;
}

// Chain rule from d/ds to d/dz through s = g(|z|) z.
Vec spatial_to_raw(const Projected& p, const Vec& grad_s) {
  if (p.dg == 0.0 && p.g == 1.0) return grad_s;
  return p.g * grad_s + p.dg * p.z.dot(grad_s) * p.z;
}

void check_batch(const GroundingBatch& batch, const ProjectionBundle& bundle) {
  if (batch.images.empty()) throw DomainError("contrastive_loss: empty batch");
  const Eigen::Index d = bundle.dim();
  for (std::size_t i = 0; i < batch.images.size(); ++i) {
    const auto& img = batch.images[i];
    if (img.anchors.empty()) {
      throw DomainError("contrastive_loss: image " + std::to_string(i) + " has no anchors");
    }
    if (img.text.size() != d) throw ContractViolation("contrastive_loss: text dimension");
    for (const auto& a : img.anchors) {
      if (a.size() != d) throw ContractViolation("contrastive_loss: anchor dimension");
    }
  }
}

}  // namespace

BundleGradients BundleGradients::zeros(Eigen::Index dim) {
  BundleGradients g;
  g.w_ev = g.w_et = g.w_hv = g.w_ht = Mat::Zero(dim, dim);
  return g;
}

double BundleGradients::max_abs() const {
  return std::max({w_ev.cwiseAbs().maxCoeff(), w_et.cwiseAbs().maxCoeff(),
                   w_hv.cwiseAbs().maxCoeff(), w_ht.cwiseAbs().maxCoeff()});
}

bool BundleGradients::all_finite() const {
  return w_ev.allFinite() && w_et.allFinite() && w_hv.allFinite() && w_ht.allFinite();
}

double info_nce_from_scores(const std::vector<std::vector<double>>& rows, double tau) {
  if (rows.empty()) throw DomainError("info_nce_from_scores: no rows");
  if (!(tau > 0.0)) throw DomainError("info_nce_from_scores: tau must be > 0");
  double total = 0.0;
  for (const auto& row : rows) {
    if (row.empty()) throw DomainError("info_nce_from_scores: empty row");
    double m = -std::numeric_limits<double>::infinity();
    for (double s : row) m = std::max(m, s / tau);
    double sum = 0.0;
    for (double s : row) sum += std::exp(s / tau - m);
    total += m + std::log(sum) - row.front() / tau;
  }
  return total / static_cast<double>(rows.size());
}

LossReport contrastive_loss(const GroundingBatch& batch, const ProjectionBundle& bundle,
                            bool intra_negatives) {
  LossOptions opts;
  opts.intra_negatives = intra_negatives;
  return contrastive_loss(batch, bundle, opts);
}

LossReport contrastive_loss(const GroundingBatch& batch, const ProjectionBundle& bundle,
                            const LossOptions& options) {
  check_batch(batch, bundle);
  if (!(bundle.tau > 0.0)) throw DomainError("contrastive_loss: tau must be > 0");
  const std::size_t num_images = batch.images.size();
  if (!options.score_offsets.empty() && options.score_offsets.size() != num_images) {
    throw ContractViolation("contrastive_loss: score_offsets needs one entry per image");
  }
  const double alpha = bundle.alpha;
  const double tau = bundle.tau;
  const double kappa = bundle.kappa;

  // Flatten anchors so every (image, anchor) pair gets a slot.
  std::vector<Projected> anchors;
  std::vector<std::size_t> first_anchor(num_images + 1, 0);
  for (std::size_t j = 0; j < num_images; ++j) {
    first_anchor[j] = anchors.size();
    for (const auto& a : batch.images[j].anchors) {
      anchors.push_back(project(a, bundle.w_ev, bundle.w_hv, kappa, bundle.embed_mode));
    }
  }
  first_anchor[num_images] = anchors.size();

  std::vector<Projected> texts;
  texts.reserve(num_images);
  for (const auto& img : batch.images) {
    texts.push_back(project(img.text, bundle.w_et, bundle.w_ht, kappa, bundle.embed_mode));
  }

  const Eigen::Index d = bundle.dim();
  std::vector<Vec> grad_anchor_e(anchors.size(), Vec::Zero(d));
  std::vector<Vec> grad_anchor_s(anchors.size(), Vec::Zero(d));
  std::vector<Vec> grad_text_e(num_images, Vec::Zero(d));
  std::vector<Vec> grad_text_s(num_images, Vec::Zero(d));

  std::vector<std::size_t> terms;
  std::vector<double> logits;
  double total = 0.0;
  const double inv_images = 1.0 / static_cast<double>(num_images);

  for (std::size_t i = 0; i < num_images; ++i) {
    const Projected& t = texts[i];
    const double offset = options.score_offsets.empty() ? 0.0 : options.score_offsets[i];
    terms.clear();
    logits.clear();
    // The positive term always comes first.
    const std::size_t pos = first_anchor[i];
    terms.push_back(pos);
    for (std::size_t j = 0; j < num_images; ++j) {
      for (std::size_t k = first_anchor[j]; k < first_anchor[j + 1]; ++k) {
        if (k == pos) continue;
        if (j == i && !options.intra_negatives) continue;
        terms.push_back(k);
      }
    }
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k : terms) {
      const Projected& a = anchors[k];
      const double sim_e = a.e.dot(t.e);
      const double sim_h = -a.x0 * t.x0 + a.s.dot(t.s);
      const double logit = (mix_scores(sim_e, sim_h, alpha) + offset) / tau;
      logits.push_back(logit);
      m = std::max(m, logit);
    }
    if (!std::isfinite(m)) throw DomainError("contrastive_loss: non-finite score");
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - m);
    const double log_z = m + std::log(sum);
    total += log_z - logits.front();

    if (!options.compute_gradients) continue;
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const double prob = std::exp(logits[q] - log_z);
      // d loss_i / d score, already divided by the batch size.
      const double coef = (prob - (q == 0 ? 1.0 : 0.0)) / tau * inv_images;
      if (coef == 0.0) continue;
      const Projected& a = anchors[terms[q]];
      const double ce = coef * (1.0 - alpha);
      const double ch = coef * alpha;
      grad_anchor_e[terms[q]] += ce * t.e;
      grad_text_e[i] += ce * a.e;
      grad_anchor_s[terms[q]] += ch * (t.s - (t.x0 / a.x0) * a.s);
      grad_text_s[i] += ch * (a.s - (a.x0 / t.x0) * t.s);
    }
  }

  LossReport report;
  report.loss = total * inv_images;
  report.grads = BundleGradients::zeros(d);
  if (options.compute_gradients) {
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      report.grads.w_ev.noalias() += anchors[k].f * grad_anchor_e[k].transpose();
      report.grads.w_hv.noalias() +=
          anchors[k].f * spatial_to_raw(anchors[k], grad_anchor_s[k]).transpose();
    }
    for (std::size_t i = 0; i < num_images; ++i) {
      report.grads.w_et.noalias() += texts[i].f * grad_text_e[i].transpose();
      report.grads.w_ht.noalias() +=
          texts[i].f * spatial_to_raw(texts[i], grad_text_s[i]).transpose();
    }
  }
  return report;
}

double hierarchical_loss(const Vec& f_cat, const Vec& f_base_ref, const Vec& f_ref,
                         const ProjectionBundle& bundle) {
  if (f_cat.size() != f_base_ref.size() || f_ref.size() != f_base_ref.size()) {
    throw ContractViolation("hierarchical_loss: feature dimensions differ");
  }
  const auto embed = [&](const Vec& f) {
    return hyperbolic_embed(f, bundle.w_ht, bundle.kappa, bundle.embed_mode);
  };
  const CurvedPoint base = embed(f_base_ref);
  return geodesic_distance(embed(f_cat), base) + geodesic_distance(embed(f_ref), base);
}

double gradient_check(const GroundingBatch& batch, const ProjectionBundle& bundle,
                      double epsilon, const LossOptions& options) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-4)) {
    throw DomainError("gradient_check: epsilon must lie in [1e-6, 1e-4]");
  }
  LossOptions with_grads = options;
  with_grads.compute_gradients = true;
  LossOptions loss_only = options;
  loss_only.compute_gradients = false;

  const LossReport analytic = contrastive_loss(batch, bundle, with_grads);
  ProjectionBundle probe = bundle;
  double worst = 0.0;

  const auto sweep = [&](Mat ProjectionBundle::*member, const Mat& grad) {
    Mat& w = probe.*member;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        const double saved = w(r, c);
        w(r, c) = saved + epsilon;
        const double up = contrastive_loss(batch, probe, loss_only).loss;
        w(r, c) = saved - epsilon;
        const double down = contrastive_loss(batch, probe, loss_only).loss;
        w(r, c) = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double a = grad(r, c);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(a - numeric) / denom);
      }
    }
  };
  sweep(&ProjectionBundle::w_ev, analytic.grads.w_ev);
  sweep(&ProjectionBundle::w_et, analytic.grads.w_et);
  sweep(&ProjectionBundle::w_hv, analytic.grads.w_hv);
  sweep(&ProjectionBundle::w_ht, analytic.grads.w_ht);
  return worst;
}

}  // namespace lihe
