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

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lihe {

// The four prompt components plus an optional image payload.
struct PromptParts {
  std::string general;      // task explanation (system message)
  std::string constraints;  // output-format constraints
  std::string examples;     // in-context example; empty when ablated
  std::string query;        // carries the referring expression
  std::optional<std::string> image;  // raw image bytes, base64-encoded on the wire

  // constraints, examples and query joined with newlines; an ablated
  // examples block is skipped entirely.
  std::string user_message() const;
};

// Count-first decomposition of one referring expression.
struct DecoupleResult {
  std::size_t count = 0;
  std::vector<std::string> phrases;
  std::string raw;

  bool operator==(const DecoupleResult& other) const {
    return count == other.count && phrases == other.phrases;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string reason, std::string raw);

  // 1-based line of the offending input, 0 when the input has no lines.
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }
  const std::string& raw() const { return raw_; }

 private:
  std::size_t line_;
  std::string reason_;
  std::string raw_;
};

std::string general_instruction();
std::string output_constraints();
std::string in_context_examples();
std::string query_for(const std::string& expression);

PromptParts build_prompt(const std::string& expression, bool include_examples = true);

// Grammar: first nonblank line is a base-10 K >= 0, followed by exactly K
// lines "<i>.<optional space><phrase>" with i = 1..K in order. Blank lines
// are ignored. Throws ParseError.
DecoupleResult parse_response(const std::string& raw);

// "K\n1. p1\n2. p2..." (just "K" when there are no phrases).
std::string render_response(const DecoupleResult& result);

// Offline fallback. Splits on " and " and expands a leading count word
// ("three glasses") into ordinal copies. It cannot see the image and never
// answers 0; anything without a conjunction or count word is one phrase.
DecoupleResult rule_based_decompose(const std::string& expression);

// --- service client -------------------------------------------------------

struct VlmRequest {
  std::string system;
  std::string user;
  std::optional<std::string> image_b64;

  // {"system": ..., "user": ..., "image_b64": ...}; image_b64 omitted when unset.
  std::string to_json() const;
};

VlmRequest make_request(const PromptParts& prompt);

class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, std::string raw)
      : std::runtime_error(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Sends one request and returns the raw response text.
class VlmTransport {
 public:
  virtual ~VlmTransport() = default;
  virtual std::string complete(const VlmRequest& request) = 0;
};

struct VlmClientConfig {
  std::string endpoint;  // e.g. http://host:port/path
  std::string api_key;   // sent as a bearer token when nonempty
  std::chrono::duration<double> timeout{30.0};
  int retries = 2;       // extra attempts after a parse failure
  bool include_examples = true;

  // VLM_ENDPOINT and VLM_API_KEY.
  static VlmClientConfig from_env();
};

// POSTs the JSON request and expects {"text": raw} back.
class HttpVlmTransport : public VlmTransport {
 public:
  explicit HttpVlmTransport(VlmClientConfig config);
  std::string complete(const VlmRequest& request) override;

 private:
  VlmClientConfig config_;
};

class DecoupleError : public std::runtime_error {
 public:
  enum class Kind { kTransport, kParse };

  DecoupleError(Kind kind, const std::string& what, std::string raw, int attempts)
      : std::runtime_error(what), kind_(kind), raw_(std::move(raw)), attempts_(attempts) {}

  Kind kind() const { return kind_; }
  // Last response body seen, for audit.
  const std::string& raw() const { return raw_; }
  int attempts() const { return attempts_; }

 private:
  Kind kind_;
  std::string raw_;
  int attempts_;
};

// Builds the prompt, asks the transport, parses. A ParseError triggers up to
// `retries` further attempts; transport errors are not retried.
DecoupleResult decouple_via_service(const std::string& expression,
                                    const std::optional<std::string>& image,
                                    VlmTransport& transport, int retries = 2,
                                    bool include_examples = true);

}  // namespace lihe
