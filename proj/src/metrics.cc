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

#include "lihe/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lihe/errors.h"

namespace lihe {

double Box::area() const {
  if (!well_ordered()) return 0.0;
  return (x2 - x1) * (y2 - y1);
}

double iou(const Box& a, const Box& b) {
  const double area_a = a.area();
  const double area_b = b.area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = area_a + area_b - inter;
  if (!(uni > 0.0)) return 0.0;
  return inter / uni;
}

MatchReport match_sample(const EvalSample& s, double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    throw DomainError("match_sample: IoU threshold must lie in (0, 1]");
  }
  MatchReport r;
  const std::size_t num_gt = s.gt_boxes.size();
  const std::size_t num_pred = s.pred_boxes.size();
  if (num_gt == 0) {
    r.fp = num_pred;
    r.f1 = num_pred == 0 ? 1.0 : 0.0;
    return r;
  }
  // Which GT boxes receive at least one prediction. The per-GT winner only
  // decides which prediction is the true positive; the counts depend solely
  // on how many GT boxes were claimed.
  std::vector<bool> claimed(num_gt, false);
  for (const Box& p : s.pred_boxes) {
    double best = -1.0;
    std::size_t best_gt = num_gt;
    for (std::size_t g = 0; g < num_gt; ++g) {
      const double v = iou(p, s.gt_boxes[g]);
      if (v >= iou_thresh && v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt < num_gt) claimed[best_gt] = true;
  }
  r.tp = static_cast<std::size_t>(std::count(claimed.begin(), claimed.end(), true));
  r.fp = num_pred - r.tp;
  r.fn = num_gt - r.tp;
  r.f1 = 2.0 * static_cast<double>(r.tp) /
         static_cast<double>(2 * r.tp + r.fp + r.fn);
  return r;
}

double precision_at_f1(const std::vector<EvalSample>& samples, double iou_thresh) {
  if (samples.empty()) throw DomainError("precision_at_f1: no samples");
  std::size_t perfect = 0;
  for (const auto& s : samples) {
    if (match_sample(s, iou_thresh).f1 == 1.0) ++perfect;
  }
  return static_cast<double>(perfect) / static_cast<double>(samples.size());
}

double n_acc(const std::vector<EvalSample>& samples) {
  std::size_t no_target = 0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (!s.gt_boxes.empty()) continue;
    ++no_target;
    if (s.pred_boxes.empty()) ++correct;
  }
  if (no_target == 0) throw DomainError("n_acc: undefined without no-target samples");
  return static_cast<double>(correct) / static_cast<double>(no_target);
}

double iou_at_05(const std::vector<EvalSample>& samples, double thresh) {
  if (samples.empty()) throw DomainError("iou_at_05: no samples");
  std::size_t hits = 0;
  for (const auto& s : samples) {
    if (s.gt_boxes.size() != 1 || s.pred_boxes.size() != 1) {
      throw DomainError("iou_at_05: sample '" + s.sample_id +
                        "' must have exactly one GT box and one prediction");
    }
    if (iou(s.pred_boxes.front(), s.gt_boxes.front()) >= thresh) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace lihe
