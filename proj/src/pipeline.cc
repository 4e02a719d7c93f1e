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

#include "lihe/pipeline.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "lihe/errors.h"
#include "lihe/hemix.h"
#include "lihe/text_encoder.h"

namespace lihe {
namespace {

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read image " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Json evaluation_report(const std::vector<EvalSample>& samples, double iou_thresh,
                       MetricKind metric, bool per_sample) {
  Json report;
  report["metric"] = metric == MetricKind::kGrec ? "grec" : "wrec";
  report["iou"] = iou_thresh;
  report["n_samples"] = samples.size();
  if (samples.empty()) {
    report["precision_at_f1"] = nullptr;
    report["n_acc"] = nullptr;
    return report;
  }
  if (metric == MetricKind::kGrec) {
    report["precision_at_f1"] = precision_at_f1(samples, iou_thresh);
    std::size_t no_target = 0;
    for (const auto& s : samples) no_target += s.gt_boxes.empty() ? 1 : 0;
    report["n_no_target"] = no_target;
    report["n_acc"] = no_target ? Json(n_acc(samples)) : Json(nullptr);
  } else {
    report["iou_at_05"] = iou_at_05(samples, iou_thresh);
  }
  if (per_sample) {
    Json rows = Json::array();
    for (const auto& s : samples) {
      const MatchReport m = match_sample(s, iou_thresh);
      rows.push_back({{"sample_id", s.sample_id},
                      {"tp", m.tp},
                      {"fp", m.fp},
                      {"fn", m.fn},
                      {"f1", m.f1}});
    }
    report["per_sample"] = std::move(rows);
  }
  return report;
}

PipelineResult run_pipeline(const PipelineConfig& config, VlmTransport* transport) {
  const ProjectionBundle bundle = load_bundle(config.weights);
  const AnchorTable anchors = anchors_from_records(read_jsonl(config.anchors));
  const std::vector<ExpressionRecord> expressions =
      expressions_from_records(read_jsonl(config.expressions));
  const std::vector<BoxSetRecord> gt = box_sets_from_records(read_jsonl(config.ground_truth));

  TextEncoder encoder(bundle.dim(), config.encoder_seed);
  if (config.lexicon) encoder.load_lexicon(*config.lexicon);

  std::unordered_map<std::string, const BoxSetRecord*> gt_by_id;
  for (const auto& g : gt) gt_by_id.emplace(g.sample_id, &g);

  PipelineResult result;
  std::vector<EvalSample> evaluated;
  Json decoupled_rows = Json::array();
  for (const auto& expr : expressions) {
    try {
      const auto gt_it = gt_by_id.find(expr.sample_id);
      if (gt_it == gt_by_id.end()) throw DomainError("no ground truth for sample");
      const auto anchor_it = anchors.find(expr.image_id);
      if (anchor_it == anchors.end()) {
        throw DomainError("no anchors for image '" + expr.image_id + "'");
      }

      GroundingSample sample;
      sample.sample_id = expr.sample_id;
      sample.anchors = anchor_it->second;
      if (transport) {
        std::optional<std::string> image;
        if (expr.image_path) image = read_bytes(*expr.image_path);
        sample.decoupled = decouple_via_service(expr.expression, image, *transport,
                                                config.retries, config.include_examples);
      } else if (expr.response) {
        sample.decoupled = parse_response(*expr.response);
      } else {
        sample.decoupled = rule_based_decompose(expr.expression);
      }
      for (const auto& phrase : sample.decoupled.phrases) {
        sample.phrase_features.push_back(encoder.encode(phrase));
      }
      const GroundingOutput out = ground(sample, bundle, config.grounding);

      result.predictions.push_back(box_set_to_json(out.sample_id, out.boxes));
      decoupled_rows.push_back({{"sample_id", expr.sample_id},
                                {"count", sample.decoupled.count},
                                {"phrases", sample.decoupled.phrases}});
      EvalSample s;
      s.sample_id = expr.sample_id;
      s.gt_boxes = gt_it->second->boxes;
      s.pred_boxes = out.boxes;
      evaluated.push_back(std::move(s));
    } catch (const std::exception& e) {
      spdlog::warn("sample {} failed: {}", expr.sample_id, e.what());
      result.failures.push_back({expr.sample_id, e.what()});
    }
  }

  result.report = evaluation_report(evaluated, config.iou, MetricKind::kGrec, true);
  result.report["n_failed"] = result.failures.size();
  Json failures = Json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"sample_id", f.sample_id}, {"reason", f.reason}});
  }
  result.report["failures"] = std::move(failures);
  result.report["decoupled"] = std::move(decoupled_rows);
  return result;
}

}  // namespace lihe
