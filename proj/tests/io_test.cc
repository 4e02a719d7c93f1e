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

#include <filesystem>

#include <gtest/gtest.h>

namespace lihe {
namespace {

const std::filesystem::path kFixture = std::filesystem::path(LIHE_TEST_DATA) / "fixture";

TEST(Jsonl, HeaderIsOptionalAndSkipped) {
  EXPECT_EQ(parse_jsonl("{\"v\":1,\"kind\":\"x\"}\n{\"sample_id\":\"a\"}\n").size(), 1u);
  EXPECT_EQ(parse_jsonl("{\"sample_id\":\"a\"}\n\n  \r\n{\"sample_id\":\"b\"}").size(), 2u);
}

TEST(Jsonl, RejectsOtherVersions) {
  EXPECT_THROW(parse_jsonl("{\"v\":2,\"kind\":\"x\"}\n"), FormatError);
  EXPECT_THROW(parse_jsonl("{\"v\":\"1\"}\n"), FormatError);
}

TEST(Jsonl, ErrorsNameTheLine) {
  try {
    parse_jsonl("{\"sample_id\":\"a\"}\n{broken\n", "f.jsonl");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("f.jsonl:2"), std::string::npos);
  }
  EXPECT_THROW(parse_jsonl("[1,2]\n"), FormatError);
}

TEST(Jsonl, RoundTrip) {
  const std::vector<Json> rows = {{{"sample_id", "a"}, {"n", 1}}, {{"sample_id", "b"}}};
  const std::string text = to_jsonl("things", rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), "{\"kind\":\"things\",\"v\":1}");
  EXPECT_EQ(parse_jsonl(text), rows);
}

TEST(Jsonl, MissingFile) { EXPECT_THROW(read_jsonl("/nonexistent/x.jsonl"), FormatError); }

TEST(Boxes, JsonRoundTrip) {
  const Box b{1.5, 2, 3, 4.25};
  EXPECT_EQ(box_from_json(box_to_json(b)), b);
  EXPECT_THROW(box_from_json(Json::array({1, 2, 3})), FormatError);
}

TEST(Anchors, FixtureLoads) {
  const AnchorTable t = anchors_from_records(read_jsonl(kFixture / "anchors.jsonl"));
  ASSERT_EQ(t.size(), 3u);
  const auto& img2 = t.at("img2");
  ASSERT_EQ(img2.size(), 4u);
  EXPECT_EQ(img2[0].confidence, 0.95);
  EXPECT_EQ(img2[1].box, (Box{20, 100, 30, 110}));
  EXPECT_EQ(img2[2].feature.size(), 4);
}

TEST(Anchors, Malformed) {
  EXPECT_THROW(anchors_from_records({Json{{"anchors", Json::array()}}}), FormatError);
  const Json bad_box = {{"image_id", "i"},
                        {"anchors", {{{"feature", {1.0}}, {"confidence", 1.0}, {"box", {5, 5, 1, 1}}}}}};
  EXPECT_THROW(anchors_from_records({bad_box}), FormatError);
  const Json ok = {{"image_id", "i"}, {"anchors", Json::array()}};
  EXPECT_THROW(anchors_from_records({ok, ok}), FormatError);
}

TEST(Expressions, OptionalFields) {
  const auto e = expressions_from_records(read_jsonl(kFixture / "expressions.jsonl"));
  ASSERT_EQ(e.size(), 8u);
  EXPECT_FALSE(e[0].response);
  ASSERT_TRUE(e[4].response);
  EXPECT_EQ(*e[4].response, "0");
  EXPECT_FALSE(e[0].image_path);
  EXPECT_THROW(expressions_from_records({Json{{"sample_id", "a"}, {"image_id", "b"}}}), FormatError);
}

TEST(Texts, LengthsMustAgree) {
  const Json r = {{"sample_id", "a"}, {"image_id", "b"}, {"phrases", {"x", "y"}}, {"features", {{1.0}}}};
  EXPECT_THROW(texts_from_records({r}), FormatError);
  const Json ok = {{"sample_id", "a"}, {"image_id", "b"}, {"phrases", {"x"}}, {"features", {{1.0, 2.0}}}};
  EXPECT_EQ(texts_from_records({ok})[0].features[0](1), 2.0);
}

TEST(BoxSets, JoinInGroundTruthOrder) {
  const std::vector<BoxSetRecord> gt = {{"b", {Box{0, 0, 1, 1}}}, {"a", {}}};
  const std::vector<BoxSetRecord> pred = {{"a", {Box{0, 0, 2, 2}}}};
  const auto s = join_for_eval(gt, pred);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].sample_id, "b");
  EXPECT_TRUE(s[0].pred_boxes.empty());
  EXPECT_EQ(s[1].pred_boxes.size(), 1u);
  EXPECT_THROW(join_for_eval(gt, {{"zzz", {}}}), FormatError);
}

TEST(BoxSets, DuplicatesRejected) {
  const Json r = box_set_to_json("a", {});
  EXPECT_THROW(box_sets_from_records({r, r}), FormatError);
  EXPECT_EQ(box_sets_from_records({r})[0].boxes.size(), 0u);
}

TEST(Vectors, RoundTrip) {
  const Vec v = (Vec(3) << 0.1, -2, 1e-300).finished();
  EXPECT_EQ(vec_from_json(vec_to_json(v)), v);
  EXPECT_THROW(vec_from_json(Json("x")), FormatError);
}

}  // namespace
}  // namespace lihe
