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
#include <string>
#include <vector>

namespace lihe {

// Axis-aligned box in absolute pixels, (x1, y1) top-left, (x2, y2) bottom-right.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  // Zero for degenerate or inverted boxes.
  double area() const;
  bool well_ordered() const { return x1 < x2 && y1 < y2; }
  bool operator==(const Box&) const = default;
};

// |a n b| / |a u b|, 0 when the union is empty or either box is degenerate.
double iou(const Box& a, const Box& b);

struct EvalSample {
  std::string sample_id;
  std::vector<Box> gt_boxes;
  std::vector<Box> pred_boxes;
};

struct MatchReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double f1 = 0.0;
};

inline constexpr double kDefaultIouThreshold = 0.5;

// Each prediction goes to its highest-IoU ground-truth box among those with
// IoU >= iou_thresh (lowest GT index on ties). A ground-truth box that
// receives several predictions keeps one true positive; the others are false
// positives. Unmatched predictions are false positives, unmatched GT boxes
// false negatives. With no GT boxes, F1 is 1 iff there are no predictions.
MatchReport match_sample(const EvalSample& s, double iou_thresh = kDefaultIouThreshold);

// Fraction of samples with F1 exactly 1. Throws DomainError when empty.
double precision_at_f1(const std::vector<EvalSample>& samples,
                       double iou_thresh = kDefaultIouThreshold);

// Among samples without GT boxes, the fraction with no predictions. Throws
// DomainError when there is no such sample.
double n_acc(const std::vector<EvalSample>& samples);

// Single-referent accuracy: fraction of samples whose one prediction has
// IoU >= thresh with the one GT box (inclusive). Throws DomainError if any
// sample carries other than exactly one GT and one prediction.
double iou_at_05(const std::vector<EvalSample>& samples, double thresh = kDefaultIouThreshold);

}  // namespace lihe
