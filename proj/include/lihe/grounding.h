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

#include "lihe/decoupling.h"
#include "lihe/hemix.h"
#include "lihe/metrics.h"

namespace lihe {

inline constexpr double kDefaultTopFraction = 0.10;

struct AnchorRecord {
  Vec feature;
  double confidence = 0.0;
  Box box;
};

// Indices of the ceil(top_fraction * n) most confident anchors (at least
// one), most confident first; equal confidences keep input order.
std::vector<std::size_t> filter_anchor_indices(const std::vector<AnchorRecord>& anchors,
                                               double top_fraction);
std::vector<AnchorRecord> filter_anchors(const std::vector<AnchorRecord>& anchors,
                                         double top_fraction);

std::vector<double> score_anchors(const Vec& text_feature,
                                  const std::vector<AnchorRecord>& anchors,
                                  const ProjectionBundle& bundle);

// argmax_k hemix(anchor_k, text), lowest index on ties. `score_offset` is
// added to every score before the argmax (test hook).
std::size_t select_anchor(const Vec& text_feature, const std::vector<AnchorRecord>& anchors,
                          const ProjectionBundle& bundle, double score_offset = 0.0);

struct GroundingSample {
  std::string sample_id;
  std::vector<AnchorRecord> anchors;
  DecoupleResult decoupled;
  std::vector<Vec> phrase_features;  // one per decoupled phrase
};

struct GroundingOutput {
  std::string sample_id;
  std::vector<Box> boxes;
  std::vector<std::string> phrases_used;
};

struct GroundingOptions {
  double top_fraction = kDefaultTopFraction;
  // Greedily forbid reusing an anchor for a later phrase while unused
  // filtered anchors remain.
  bool distinct_anchors = false;
};

// K = 0 yields no boxes. Otherwise anchors are filtered once and each phrase
// picks its own anchor; boxes come out in phrase order.
GroundingOutput ground(const GroundingSample& sample, const ProjectionBundle& bundle,
                       const GroundingOptions& options = {});

}  // namespace lihe
