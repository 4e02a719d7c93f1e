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

// JSONL readers and writers for the on-disk formats.
//
// Every file written here starts with a header object {"v": 1, "kind": ...}.
// Readers accept files with or without that header; a header with a
// different version is rejected.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lihe/grounding.h"
#include "lihe/metrics.h"

namespace lihe {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Malformed or unreadable input file; the message names file and line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data records of a JSONL file, header removed.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::vector<Json> parse_jsonl(const std::string& text, const std::string& source = "<string>");

std::string to_jsonl(const std::string& kind, const std::vector<Json>& records);
void write_jsonl(const std::filesystem::path& path, const std::string& kind,
                 const std::vector<Json>& records);
void write_text(const std::filesystem::path& path, const std::string& text);

Json box_to_json(const Box& b);
Box box_from_json(const Json& j);

// {"image_id", "anchors": [{"feature", "confidence", "box"}]}
using AnchorTable = std::map<std::string, std::vector<AnchorRecord>>;
AnchorTable anchors_from_records(const std::vector<Json>& records);

// {"sample_id", "image_id", "phrases": [...], "features": [[...]...]}
struct TextRecord {
  std::string sample_id;
  std::string image_id;
  std::vector<std::string> phrases;
  std::vector<Vec> features;
};
std::vector<TextRecord> texts_from_records(const std::vector<Json>& records);

// {"sample_id", "image_id", "expression", "image"?: path, "response"?: text}
// `response` is a recorded service answer, replayed in offline runs.
struct ExpressionRecord {
  std::string sample_id;
  std::string image_id;
  std::string expression;
  std::optional<std::string> image_path;
  std::optional<std::string> response;
};
std::vector<ExpressionRecord> expressions_from_records(const std::vector<Json>& records);

// {"sample_id", "boxes": [[x1,y1,x2,y2]...]}, shared by ground truth and
// predictions. Order of first appearance is preserved.
struct BoxSetRecord {
  std::string sample_id;
  std::vector<Box> boxes;
};
std::vector<BoxSetRecord> box_sets_from_records(const std::vector<Json>& records);
Json box_set_to_json(const std::string& sample_id, const std::vector<Box>& boxes);

// Pairs predictions with ground truth by sample_id, in ground-truth order.
// A sample missing from the predictions counts as predicting nothing.
std::vector<EvalSample> join_for_eval(const std::vector<BoxSetRecord>& gt,
                                      const std::vector<BoxSetRecord>& pred);

Vec vec_from_json(const Json& j);
Json vec_to_json(const Vec& v);

}  // namespace lihe
