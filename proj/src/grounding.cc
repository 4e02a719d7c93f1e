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

#include "lihe/grounding.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lihe/errors.h"

namespace lihe {
namespace {

// Absorbs products like 0.07 * 100 = 7.000000000000001 before the ceil.
constexpr double kCountSlack = 1e-9;

}  // namespace

std::vector<std::size_t> filter_anchor_indices(const std::vector<AnchorRecord>& anchors,
                                               double top_fraction) {
  if (anchors.empty()) throw DomainError("filter_anchors: no anchors");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw DomainError("filter_anchors: top_fraction must lie in (0, 1]");
  }
  std::vector<std::size_t> order(anchors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return anchors[a].confidence > anchors[b].confidence;
  });
  const double wanted = std::ceil(top_fraction * static_cast<double>(anchors.size()) - kCountSlack);
  const std::size_t keep =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(wanted, 1.0)), 1, anchors.size());
  order.resize(keep);
  return order;
}

std::vector<AnchorRecord> filter_anchors(const std::vector<AnchorRecord>& anchors,
                                         double top_fraction) {
  std::vector<AnchorRecord> out;
  for (std::size_t i : filter_anchor_indices(anchors, top_fraction)) out.push_back(anchors[i]);
  return out;
}

std::vector<double> score_anchors(const Vec& text_feature,
                                  const std::vector<AnchorRecord>& anchors,
                                  const ProjectionBundle& bundle) {
  std::vector<double> scores;
  scores.reserve(anchors.size());
  for (const auto& a : anchors) scores.push_back(hemix(a.feature, text_feature, bundle));
  return scores;
}

std::size_t select_anchor(const Vec& text_feature, const std::vector<AnchorRecord>& anchors,
                          const ProjectionBundle& bundle, double score_offset) {
  if (anchors.empty()) throw DomainError("select_anchor: no anchors");
  const std::vector<double> scores = score_anchors(text_feature, anchors, bundle);
  std::size_t best = 0;
  double best_score = scores[0] + score_offset;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    const double s = scores[k] + score_offset;
    if (s > best_score) {
      best = k;
      best_score = s;
    }
  }
  return best;
}

GroundingOutput ground(const GroundingSample& sample, const ProjectionBundle& bundle,
                       const GroundingOptions& options) {
  GroundingOutput out;
  out.sample_id = sample.sample_id;
  const DecoupleResult& d = sample.decoupled;
  if (d.count != d.phrases.size()) {
    throw DomainError("ground: decoupled count disagrees with phrase list");
  }
  if (sample.phrase_features.size() != d.count) {
    throw DomainError("ground: expected " + std::to_string(d.count) +
                      " phrase features, got " + std::to_string(sample.phrase_features.size()));
  }
  if (d.count == 0) return out;

  const std::vector<std::size_t> kept = filter_anchor_indices(sample.anchors, options.top_fraction);
  std::vector<AnchorRecord> candidates;
  candidates.reserve(kept.size());
  for (std::size_t i : kept) candidates.push_back(sample.anchors[i]);

  std::vector<bool> used(candidates.size(), false);
  for (std::size_t p = 0; p < d.count; ++p) {
    std::size_t pick = 0;
    if (!options.distinct_anchors) {
      pick = select_anchor(sample.phrase_features[p], candidates, bundle);
    } else {
      const std::vector<double> scores =
          score_anchors(sample.phrase_features[p], candidates, bundle);
      const bool any_free = std::find(used.begin(), used.end(), false) != used.end();
      bool found = false;
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (any_free && used[k]) continue;
        if (!found || scores[k] > scores[pick]) {
          pick = k;
          found = true;
        }
      }
      used[pick] = true;
    }
    out.boxes.push_back(candidates[pick].box);
    out.phrases_used.push_back(d.phrases[p]);
  }
  return out;
}

}  // namespace lihe
