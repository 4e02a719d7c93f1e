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

#include <vector>

#include "lihe/metrics.h"

namespace lihe::testing_support {

// Literal reading of the procedure: every prediction with IoU >= t against
// some GT is a candidate for it; among the candidates of one GT only the
// highest-IoU prediction is a true positive.
inline MatchReport naive_match(const EvalSample& s, double t) {
  MatchReport r;
  const std::size_t ng = s.gt_boxes.size(), np = s.pred_boxes.size();
  if (ng == 0) {
    r.fp = np;
    r.f1 = np == 0 ? 1.0 : 0.0;
    return r;
  }
  std::vector<int> assigned(np, -1);
  for (std::size_t p = 0; p < np; ++p) {
    double best = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      const double v = iou(s.pred_boxes[p], s.gt_boxes[g]);
      if (v >= t && (assigned[p] < 0 || v > best)) {
        assigned[p] = static_cast<int>(g);
        best = v;
      }
    }
  }
  for (std::size_t g = 0; g < ng; ++g) {
    bool hit = false;
    for (std::size_t p = 0; p < np; ++p) hit = hit || assigned[p] == static_cast<int>(g);
    if (hit) ++r.tp;
  }
  r.fp = np - r.tp;
  r.fn = ng - r.tp;
  r.f1 = 2.0 * r.tp / (2.0 * r.tp + r.fp + r.fn);
  return r;
}

}  // namespace lihe::testing_support
