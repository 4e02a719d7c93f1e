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

#include "lihe/decoupling.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <string_view>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace lihe {
namespace {

using nlohmann::json;

constexpr std::string_view kGeneral =
    "Task Explanation: You need to process an image and a referring expression. The image may "
    "contain zero, one, or multiple target objects corresponding to the referring expression. "
    "Analyze the image to determine whether the target exists. If the target does not exist or "
    "the referring expression is empty, output a single number \"0\". If the target exists, "
    "output the number of targets and generate a unique referring expression for each target. "
    "The referring expressions must describe distinct targets unambiguously using attributes "
    "like color, position, size, etc.";

constexpr std::string_view kConstraints =
    "You should provide a number indicating how many targets exist in the image, and then "
    "describe each target with a short, distinct phrase. Prefix each phrase with its ordinal "
    "number. The number of targets is extremely important — please check carefully. The "
    "phrases must be accurate and distinct.";

// The "\n" sequences inside the quoted example are literal backslash-n, as
// the model is shown them.
constexpr std::string_view kExamples =
    "For example, if the referring expression is \"3 people\", you should output:\n"
    "\"3\\n1. person ...\\n2. person ...\\n3. person ...\"\n"
    "The word \"and\" is generally used between two target items.";

constexpr std::string_view kQueryPrefix = "The referring expression is: ";

constexpr std::array<std::string_view, 10> kCountWords = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};
constexpr std::array<std::string_view, 10> kOrdinals = {
    "first", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth"};

std::string trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : raw) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  lines.push_back(current);
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return lines;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<std::size_t> to_count(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// "three glasses" -> 3 copies; anything else -> the phrase itself.
std::vector<std::string> expand_count(const std::string& phrase) {
  const auto space = phrase.find(' ');
  if (space == std::string::npos) return {phrase};
  const std::string head = lowercase(phrase.substr(0, space));
  const std::string rest = trim(std::string_view(phrase).substr(space + 1));
  if (rest.empty()) return {phrase};
  std::size_t count = 0;
  if (const auto n = to_count(head)) {
    count = *n;
  } else {
    const auto it = std::find(kCountWords.begin(), kCountWords.end(), head);
    if (it != kCountWords.end()) count = static_cast<std::size_t>(it - kCountWords.begin()) + 1;
  }
  if (count < 2 || count > kOrdinals.size()) return {phrase};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::string(kOrdinals[i]) + " " + rest);
  return out;
}

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  const auto path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string reason, std::string raw)
    : std::runtime_error("decoupling response, line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)),
      raw_(std::move(raw)) {}

std::string general_instruction() { return std::string(kGeneral); }
std::string output_constraints() { return std::string(kConstraints); }
std::string in_context_examples() { return std::string(kExamples); }
std::string query_for(const std::string& expression) {
  return std::string(kQueryPrefix) + expression;
}

std::string PromptParts::user_message() const {
  std::string out = constraints;
  if (!examples.empty()) out += "\n" + examples;
  out += "\n" + query;
  return out;
}

PromptParts build_prompt(const std::string& expression, bool include_examples) {
  PromptParts p;
  p.general = general_instruction();
  p.constraints = output_constraints();
  if (include_examples) p.examples = in_context_examples();
  p.query = query_for(expression);
  return p;
}

DecoupleResult parse_response(const std::string& raw) {
  const std::vector<std::string> lines = split_lines(raw);
  std::size_t idx = 0;
  while (idx < lines.size() && trim(lines[idx]).empty()) ++idx;
  if (idx == lines.size()) throw ParseError(0, "empty response", raw);

  const std::string head = trim(lines[idx]);
  const auto count = to_count(head);
  if (!count) throw ParseError(idx + 1, "expected a target count, got '" + head + "'", raw);

  DecoupleResult result;
  result.count = *count;
  result.raw = raw;
  std::size_t expected = 1;
  for (++idx; idx < lines.size(); ++idx) {
    const std::string line = trim(lines[idx]);
    if (line.empty()) continue;
    const std::size_t line_no = idx + 1;
    if (expected > result.count) {
      throw ParseError(line_no,
                       "count mismatch: header says " + std::to_string(result.count) +
                           " but more phrases follow",
                       raw);
    }
    const auto dot = line.find('.');
    if (dot == std::string::npos || dot == 0) {
      throw ParseError(line_no, "expected '<ordinal>.' prefix", raw);
    }
    const auto ordinal = to_count(std::string_view(line).substr(0, dot));
    if (!ordinal) throw ParseError(line_no, "ordinal is not a number", raw);
    if (*ordinal != expected) {
      throw ParseError(line_no,
                       "ordinal " + std::to_string(*ordinal) + " out of sequence, expected " +
                           std::to_string(expected),
                       raw);
    }
    std::string phrase = trim(std::string_view(line).substr(dot + 1));
    if (phrase.empty()) throw ParseError(line_no, "empty phrase", raw);
    result.phrases.push_back(std::move(phrase));
    ++expected;
  }
  if (result.phrases.size() != result.count) {
    throw ParseError(lines.size(),
                     "count mismatch: header says " + std::to_string(result.count) + ", found " +
                         std::to_string(result.phrases.size()) + " phrases",
                     raw);
  }
  return result;
}

std::string render_response(const DecoupleResult& result) {
  std::ostringstream out;
  out << result.phrases.size();
  for (std::size_t i = 0; i < result.phrases.size(); ++i) {
    out << '\n' << (i + 1) << ". " << result.phrases[i];
  }
  return out.str();
}

DecoupleResult rule_based_decompose(const std::string& expression) {
  DecoupleResult result;
  const std::string text = trim(expression);
  if (text.empty()) {
    // No vision, so no basis for a no-target answer.
    result.count = 1;
    result.phrases.push_back(expression);
    result.raw = "1\n1. " + expression;
    return result;
  }
  constexpr std::string_view kAnd = " and ";
  std::vector<std::string> conjuncts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(kAnd, start);
    const std::string part =
        trim(std::string_view(text).substr(start, pos == std::string::npos ? pos : pos - start));
    if (!part.empty()) conjuncts.push_back(part);
    if (pos == std::string::npos) break;
    start = pos + kAnd.size();
  }
  if (conjuncts.empty()) conjuncts.push_back(text);
  for (const auto& c : conjuncts) {
    for (auto& p : expand_count(c)) result.phrases.push_back(std::move(p));
  }
  result.count = result.phrases.size();
  result.raw = render_response(result);
  return result;
}

std::string VlmRequest::to_json() const {
  json j;
  j["system"] = system;
  j["user"] = user;
  if (image_b64) j["image_b64"] = *image_b64;
  return j.dump();
}

VlmRequest make_request(const PromptParts& prompt) {
  VlmRequest r;
  r.system = prompt.general;
  r.user = prompt.user_message();
  if (prompt.image) r.image_b64 = httplib::detail::base64_encode(*prompt.image);
  return r;
}

VlmClientConfig VlmClientConfig::from_env() {
  VlmClientConfig c;
  if (const char* e = std::getenv("VLM_ENDPOINT")) c.endpoint = e;
  if (const char* k = std::getenv("VLM_API_KEY")) c.api_key = k;
  return c;
}

HttpVlmTransport::HttpVlmTransport(VlmClientConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw TransportError("no VLM endpoint configured (set VLM_ENDPOINT)", "");
  }
}

std::string HttpVlmTransport::complete(const VlmRequest& request) {
  const auto [base, path] = split_endpoint(config_.endpoint);
  httplib::Client client(base);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(path, headers, request.to_json(), "application/json");
  if (!res) {
    throw TransportError("VLM request failed: " + httplib::to_string(res.error()), "");
  }
  if (res->status != 200) {
    throw TransportError("VLM endpoint returned HTTP " + std::to_string(res->status), res->body);
  }
  try {
    const json body = json::parse(res->body);
    return body.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed VLM response body: ") + e.what(), res->body);
  }
}

DecoupleResult decouple_via_service(const std::string& expression,
                                    const std::optional<std::string>& image,
                                    VlmTransport& transport, int retries,
                                    bool include_examples) {
  PromptParts prompt = build_prompt(expression, include_examples);
  prompt.image = image;
  const VlmRequest request = make_request(prompt);
  const int attempts = 1 + std::max(retries, 0);
  std::string last_raw;
  std::string last_reason;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      last_raw = transport.complete(request);
    } catch (const TransportError& e) {
      throw DecoupleError(DecoupleError::Kind::kTransport, e.what(), e.raw(), attempt);
    }
    try {
      return parse_response(last_raw);
    } catch (const ParseError& e) {
      last_reason = e.what();
      spdlog::debug("decouple attempt {}/{} unparseable: {}", attempt, attempts, e.what());
    }
  }
  throw DecoupleError(DecoupleError::Kind::kParse,
                      "no parseable response after " + std::to_string(attempts) +
                          " attempts (" + last_reason + ")",
                      last_raw, attempts);
}

}  // namespace lihe
