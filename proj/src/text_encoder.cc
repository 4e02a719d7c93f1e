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

#include "lihe/text_encoder.h"

#include <cctype>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "lihe/errors.h"

namespace lihe {
namespace {

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

TextEncoder::TextEncoder(Eigen::Index dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 1) throw ContractViolation("TextEncoder: dimension must be >= 1");
}

void TextEncoder::add(const std::string& phrase, Vec feature) {
  if (feature.size() != dim_) throw ContractViolation("lexicon entry has the wrong dimension");
  lexicon_[phrase] = std::move(feature);
}

void TextEncoder::load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path.string());
  const auto j = nlohmann::json::parse(in);
  for (const auto& [phrase, values] : j.items()) {
    Vec v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = values[i].get<double>();
    }
    add(phrase, std::move(v));
  }
}

Vec TextEncoder::token_vector(const std::string& token) const {
  std::mt19937_64 rng(fnv1a(token) ^ seed_);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec v(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) v(i) = unit(rng);
  return v;
}

Vec TextEncoder::encode(const std::string& phrase) const {
  if (auto it = lexicon_.find(phrase); it != lexicon_.end()) return it->second;
  Vec sum = Vec::Zero(dim_);
  std::string token;
  auto flush = [&] {
    if (!token.empty()) sum += token_vector(token);
    token.clear();
  };
  for (unsigned char c : phrase) {
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  const double n = sum.norm();
  return n > 0.0 ? Vec(sum / n) : sum;
}

}  // namespace lihe
