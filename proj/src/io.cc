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

#include "lihe/io.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace lihe {
namespace {

bool is_header(const Json& j) {
  return j.is_object() && j.contains("v") && !j.contains("sample_id") &&
         !j.contains("image_id");
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

template <typename Fn>
auto field(const Json& j, const char* name, std::size_t index, Fn&& convert) {
  try {
    return convert(j.at(name));
  } catch (const Json::exception& e) {
    throw FormatError("record " + std::to_string(index + 1) + ": field '" + name +
                      "': " + e.what());
  }
}

}  // namespace

std::vector<Json> parse_jsonl(const std::string& text, const std::string& source) {
  std::vector<Json> records;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(where(source, line_no) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw FormatError(where(source, line_no) + ": expected an object");
    if (first && is_header(j)) {
      if (!j["v"].is_number_integer() || j["v"].get<int>() != kSchemaVersion) {
        throw FormatError(where(source, line_no) + ": unsupported schema version " +
                          j["v"].dump());
      }
      first = false;
      continue;
    }
    first = false;
    records.push_back(std::move(j));
  }
  return records;
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str(), path.string());
}

std::string to_jsonl(const std::string& kind, const std::vector<Json>& records) {
  std::string out = Json{{"v", kSchemaVersion}, {"kind", kind}}.dump();
  out.push_back('\n');
  for (const auto& r : records) {
    out += r.dump();
    out.push_back('\n');
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << text;
}

void write_jsonl(const std::filesystem::path& path, const std::string& kind,
                 const std::vector<Json>& records) {
  write_text(path, to_jsonl(kind, records));
}

Json box_to_json(const Box& b) { return Json::array({b.x1, b.y1, b.x2, b.y2}); }

Box box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("box must be [x1, y1, x2, y2]");
  return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("feature must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

AnchorTable anchors_from_records(const std::vector<Json>& records) {
  AnchorTable table;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    const auto id = field(r, "image_id", i, [](const Json& j) { return j.get<std::string>(); });
    if (table.count(id)) throw FormatError("duplicate image_id '" + id + "'");
    auto anchors = field(r, "anchors", i, [i](const Json& list) {
      std::vector<AnchorRecord> out;
      for (const Json& a : list) {
        AnchorRecord rec;
        rec.feature = field(a, "feature", i, vec_from_json);
        rec.confidence = field(a, "confidence", i, [](const Json& j) { return j.get<double>(); });
        rec.box = field(a, "box", i, box_from_json);
        if (!rec.box.well_ordered()) {
          throw FormatError("record " + std::to_string(i + 1) + ": anchor box is not well ordered");
        }
        out.push_back(std::move(rec));
      }
      return out;
    });
    table.emplace(id, std::move(anchors));
  }
  return table;
}

std::vector<TextRecord> texts_from_records(const std::vector<Json>& records) {
  std::vector<TextRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    TextRecord t;
    t.sample_id = field(r, "sample_id", i, [](const Json& j) { return j.get<std::string>(); });
    t.image_id = field(r, "image_id", i, [](const Json& j) { return j.get<std::string>(); });
    t.phrases = field(r, "phrases", i,
                      [](const Json& j) { return j.get<std::vector<std::string>>(); });
    t.features = field(r, "features", i, [](const Json& list) {
      std::vector<Vec> fs;
      for (const Json& f : list) fs.push_back(vec_from_json(f));
      return fs;
    });
    if (t.features.size() != t.phrases.size()) {
      throw FormatError("record " + std::to_string(i + 1) + ": phrases and features differ in length");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ExpressionRecord> expressions_from_records(const std::vector<Json>& records) {
  std::vector<ExpressionRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    ExpressionRecord e;
    e.sample_id = field(r, "sample_id", i, [](const Json& j) { return j.get<std::string>(); });
    e.image_id = field(r, "image_id", i, [](const Json& j) { return j.get<std::string>(); });
    e.expression = field(r, "expression", i, [](const Json& j) { return j.get<std::string>(); });
    const auto as_string = [](const Json& j) { return j.get<std::string>(); };
    if (r.contains("image")) e.image_path = field(r, "image", i, as_string);
    if (r.contains("response")) e.response = field(r, "response", i, as_string);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<BoxSetRecord> box_sets_from_records(const std::vector<Json>& records) {
  std::vector<BoxSetRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    BoxSetRecord b;
    b.sample_id = field(r, "sample_id", i, [](const Json& j) { return j.get<std::string>(); });
    if (!seen.insert(b.sample_id).second) {
      throw FormatError("duplicate sample_id '" + b.sample_id + "'");
    }
    b.boxes = field(r, "boxes", i, [](const Json& list) {
      std::vector<Box> boxes;
      for (const Json& j : list) boxes.push_back(box_from_json(j));
      return boxes;
    });
    out.push_back(std::move(b));
  }
  return out;
}

Json box_set_to_json(const std::string& sample_id, const std::vector<Box>& boxes) {
  Json list = Json::array();
  for (const Box& b : boxes) list.push_back(box_to_json(b));
  return Json{{"sample_id", sample_id}, {"boxes", std::move(list)}};
}

std::vector<EvalSample> join_for_eval(const std::vector<BoxSetRecord>& gt,
                                      const std::vector<BoxSetRecord>& pred) {
  std::unordered_map<std::string, const BoxSetRecord*> by_id;
  for (const auto& p : pred) by_id.emplace(p.sample_id, &p);
  std::set<std::string> gt_ids;
  std::vector<EvalSample> out;
  for (const auto& g : gt) {
    gt_ids.insert(g.sample_id);
    EvalSample s;
    s.sample_id = g.sample_id;
    s.gt_boxes = g.boxes;
    if (auto it = by_id.find(g.sample_id); it != by_id.end()) s.pred_boxes = it->second->boxes;
    out.push_back(std::move(s));
  }
  for (const auto& p : pred) {
    if (!gt_ids.count(p.sample_id)) {
      throw FormatError("prediction for unknown sample '" + p.sample_id + "'");
    }
  }
  return out;
}

}  // namespace lihe
