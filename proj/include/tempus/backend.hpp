#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tempus/error.hpp"
#include "tempus/text.hpp"

namespace tempus::backend {

struct PolaritySimplex {
  double negative = 0;
  double neutral = 0;
  double positive = 0;

  // Each component in [0, 1] and the sum within `tolerance` of 1.
  bool is_valid(double tolerance = 1e-6) const;
  bool operator==(const PolaritySimplex&) const = default;
};

struct AspectQuery {
  std::string_view text;
  std::string_view aspect;
  text::Span span;  // byte offsets into text
};

struct TokenLogProbs {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;  // natural log, one per token
};

class SentimentBackend {
 public:
  virtual ~SentimentBackend() = default;
  virtual std::string model_id() = 0;
  virtual PolaritySimplex score(const AspectQuery& query) = 0;
};

class LogProbBackend {
 public:
  virtual ~LogProbBackend() = default;
  virtual std::string model_id() = 0;
  virtual TokenLogProbs logprobs(std::string_view context, std::string_view continuation) = 0;
};

inline constexpr std::string_view kStubModelId = "stub-v1";

// Weights (1 + n, 1, 1 + p) normalized, where n and p count the literal
// markers "[NEG]" and "[POS]" in the text.
PolaritySimplex stub_aspect_sentiment(std::string_view text);

// Whitespace tokens of the lowercased continuation: -1.0 when the token also
// occurs in the lowercased context, else -2.0.
TokenLogProbs stub_logprobs(std::string_view context, std::string_view continuation);

class StubBackend final : public SentimentBackend, public LogProbBackend {
 public:
  std::string model_id() override { return std::string(kStubModelId); }
  PolaritySimplex score(const AspectQuery& query) override { return stub_aspect_sentiment(query.text); }
  TokenLogProbs logprobs(std::string_view context, std::string_view continuation) override {
    return stub_logprobs(context, continuation);
  }
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_delay{200};
  double multiplier = 2.0;
};

// Calls `f`, retrying TransientBackendError up to `policy.max_retries` times
// with exponential backoff. Other errors propagate immediately.
template <class F>
auto call_with_retry(const RetryPolicy& policy, F&& f) -> decltype(f()) {
  auto delay = policy.initial_delay;
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const TransientBackendError& e) {
      if (attempt >= policy.max_retries) {
        throw Error(ErrorKind::Backend, std::string(e.what()) + " (gave up after " +
                                            std::to_string(attempt + 1) + " attempts)");
      }
    }
    std::this_thread::sleep_for(delay);
    delay = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(delay.count()) * policy.multiplier));
  }
}

// Client for the inference sidecar's HTTP/JSON protocol:
//   GET  /v1/model             -> {"mode", "model_id"}
//   POST /v1/aspect-sentiment  {"text", "aspect", "aspect_char_span"} -> simplex
//   POST /v1/logprobs          {"context", "continuation"} -> {"tokens", "token_logprobs"}
// Spans on the wire are Unicode code point offsets.
class HttpBackend final : public SentimentBackend, public LogProbBackend {
 public:
  explicit HttpBackend(std::string base_url, RetryPolicy retry = {},
                       std::chrono::seconds timeout = std::chrono::seconds(60));

  std::string model_id() override;
  PolaritySimplex score(const AspectQuery& query) override;
  TokenLogProbs logprobs(std::string_view context, std::string_view continuation) override;

  const std::string& base_url() const { return base_url_; }

 private:
  nlohmann::json post(const std::string& path, const nlohmann::json& body);
  nlohmann::json get(const std::string& path);

  std::string base_url_;
  RetryPolicy retry_;
  std::chrono::seconds timeout_;
  std::mutex mutex_;
  std::optional<std::string> model_id_;
};

// Code point offset of byte offset `byte` in UTF-8 text.
std::size_t code_point_offset(std::string_view text, std::size_t byte);

nlohmann::json aspect_request_json(const AspectQuery& query);
nlohmann::json to_json(const PolaritySimplex& s);

}  // namespace tempus::backend
