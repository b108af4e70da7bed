#include "tempus/backend.hpp"

#include <unordered_set>

#include <httplib.h>

namespace tempus::backend {

namespace {

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

double require_number(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    throw Error(ErrorKind::Backend, std::string("backend response lacks numeric field '") + field + "'");
  }
  return it->get<double>();
}

}  // namespace

bool PolaritySimplex::is_valid(double tolerance) const {
  for (double v : {negative, neutral, positive}) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return std::abs(negative + neutral + positive - 1.0) <= tolerance;
}

PolaritySimplex stub_aspect_sentiment(std::string_view text) {
  const double n = static_cast<double>(count_occurrences(text, "[NEG]"));
  const double p = static_cast<double>(count_occurrences(text, "[POS]"));
  const double wn = 1.0 + n;
  const double wu = 1.0;
  const double wp = 1.0 + p;
  const double total = wn + wu + wp;
  return {wn / total, wu / total, wp / total};
}

TokenLogProbs stub_logprobs(std::string_view context, std::string_view continuation) {
  const std::string ctx = text::to_lower(context);
  std::unordered_set<std::string_view> seen;
  for (auto tok : text::split_whitespace(ctx)) seen.insert(tok);
  TokenLogProbs out;
  const std::string cont = text::to_lower(continuation);
  for (auto tok : text::split_whitespace(cont)) {
    out.tokens.emplace_back(tok);
    out.logprobs.push_back(seen.count(tok) ? -1.0 : -2.0);
  }
  return out;
}

std::size_t code_point_offset(std::string_view text, std::size_t byte) {
  return text::count_code_points(text.substr(0, std::min(byte, text.size())));
}

nlohmann::json aspect_request_json(const AspectQuery& query) {
  return {{"text", query.text},
          {"aspect", query.aspect},
          {"aspect_char_span",
           {code_point_offset(query.text, query.span.begin), code_point_offset(query.text, query.span.end)}}};
}

nlohmann::json to_json(const PolaritySimplex& s) {
  return {{"negative", s.negative}, {"neutral", s.neutral}, {"positive", s.positive}};
}

HttpBackend::HttpBackend(std::string base_url, RetryPolicy retry, std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), retry_(retry), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.rfind("http://", 0) != 0) {
    throw Error(ErrorKind::Validation, "backend URL must start with http://: " + base_url_);
  }
}

namespace {

nlohmann::json handle_result(const httplib::Result& res, const std::string& what) {
  if (!res) {
    throw TransientBackendError(what + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw TransientBackendError(what + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorKind::Backend, what + ": HTTP " + std::to_string(res->status) + " " + res->body);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Backend, what + ": malformed JSON response");
  }
}

}  // namespace

nlohmann::json HttpBackend::post(const std::string& path, const nlohmann::json& body) {
  const auto payload = body.dump();
  return call_with_retry(retry_, [&] {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    return handle_result(client.Post(path, payload, "application/json"), "POST " + base_url_ + path);
  });
}

nlohmann::json HttpBackend::get(const std::string& path) {
  return call_with_retry(retry_, [&] {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    return handle_result(client.Get(path), "GET " + base_url_ + path);
  });
}

std::string HttpBackend::model_id() {
  std::lock_guard lock(mutex_);
  if (!model_id_) {
    const auto j = get("/v1/model");
    if (!j.contains("model_id") || !j["model_id"].is_string()) {
      throw Error(ErrorKind::Backend, "backend /v1/model response lacks model_id");
    }
    model_id_ = j["model_id"].get<std::string>();
  }
  return *model_id_;
}

PolaritySimplex HttpBackend::score(const AspectQuery& query) {
  const auto j = post("/v1/aspect-sentiment", aspect_request_json(query));
  return {require_number(j, "negative"), require_number(j, "neutral"), require_number(j, "positive")};
}

TokenLogProbs HttpBackend::logprobs(std::string_view context, std::string_view continuation) {
  const auto j = post("/v1/logprobs", {{"context", context}, {"continuation", continuation}});
  TokenLogProbs out;
  try {
    out.tokens = j.at("tokens").get<std::vector<std::string>>();
    out.logprobs = j.at("token_logprobs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::Backend, "backend /v1/logprobs response lacks tokens/token_logprobs");
  }
  if (out.tokens.size() != out.logprobs.size()) {
    throw Error(ErrorKind::Backend, "backend /v1/logprobs returned mismatched list lengths");
  }
  for (double lp : out.logprobs) {
    if (!std::isfinite(lp) || lp > 0) {
      throw Error(ErrorKind::Backend, "backend /v1/logprobs returned a log-probability above 0");
    }
  }
  return out;
}

}  // namespace tempus::backend
