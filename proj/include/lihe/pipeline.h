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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lihe/decoupling.h"
#include "lihe/grounding.h"
#include "lihe/io.h"
#include "lihe/metrics.h"

namespace lihe {

enum class MetricKind { kGrec, kWrec };

// {"metric", "iou", "n_samples", ...}. grec adds precision_at_f1, n_acc
// (null without no-target samples) and n_no_target; wrec adds iou_at_05.
// per_sample lists tp/fp/fn/f1 for every sample when requested.
Json evaluation_report(const std::vector<EvalSample>& samples, double iou_thresh,
                       MetricKind metric, bool per_sample);

struct PipelineConfig {
  std::filesystem::path anchors;
  std::filesystem::path expressions;
  std::filesystem::path weights;
  std::filesystem::path ground_truth;
  std::optional<std::filesystem::path> lexicon;
  GroundingOptions grounding;
  double iou = kDefaultIouThreshold;
  int retries = 2;
  bool include_examples = true;
  std::uint64_t encoder_seed = 42;
};

struct PipelineFailure {
  std::string sample_id;
  std::string reason;
};

struct PipelineResult {
  std::vector<Json> predictions;  // {"sample_id", "boxes"} in input order
  Json report;
  std::vector<PipelineFailure> failures;
};

// decouple -> ground -> evaluate for every expression record. With a null
// transport a record's recorded "response" is parsed if present, otherwise
// the offline rule-based decomposer is used. Unreadable inputs
// throw (FormatError, std::runtime_error); a sample that fails on its own
// is listed under "failures" and left out of predictions and metrics.
PipelineResult run_pipeline(const PipelineConfig& config, VlmTransport* transport);

}  // namespace lihe
