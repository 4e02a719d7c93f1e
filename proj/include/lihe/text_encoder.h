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
#include <map>
#include <string>

#include "lihe/lorentz.h"

namespace lihe {

// Stand-in for a sentence encoder when only phrases are available offline.
// A phrase found in the lexicon returns its stored vector; any other phrase
// is embedded as the L2-normalised sum of per-token pseudo-random vectors,
// each derived from a hash of the lower-cased token and `seed`.
class TextEncoder {
 public:
  TextEncoder(Eigen::Index dim, std::uint64_t seed = 0);

  void add(const std::string& phrase, Vec feature);
  // JSON object {"phrase": [f64...], ...}
  void load_lexicon(const std::filesystem::path& path);

  Vec encode(const std::string& phrase) const;
  Eigen::Index dim() const { return dim_; }

 private:
  Vec token_vector(const std::string& token) const;

  Eigen::Index dim_;
  std::uint64_t seed_;
  std::map<std::string, Vec> lexicon_;
};

}  // namespace lihe
