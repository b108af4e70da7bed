#include <doctest.h>

#include <cstring>

#include "fake_sidecar.hpp"
#include "support.hpp"
#include "tempus/backend.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"

using namespace tempus;
using namespace tempus::backend;

namespace {

RetryPolicy fast_retry(int retries = 3) { return {retries, std::chrono::milliseconds(1), 2.0}; }

std::size_t byte_offset(std::string_view text, std::size_t code_points) {
  std::size_t i = 0;
  for (std::size_t cp = 0; cp < code_points && i < text.size(); ++cp) {
    ++i;
    while (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
  }
  return i;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("stub sentiment arithmetic") {
  CHECK(stub_aspect_sentiment("no cues") == PolaritySimplex{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(stub_aspect_sentiment("one [POS] cue") == PolaritySimplex{0.25, 0.25, 0.5});
  const auto s = stub_aspect_sentiment("It ended [NEG] [NEG] badly");
  CHECK(s.negative == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(s.neutral == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(s.is_valid());
}

TEST_CASE("stub log-probs") {
  auto lp = stub_logprobs("a b", "a c");
  CHECK(lp.logprobs == std::vector<double>{-1.0, -2.0});
  CHECK(lp.tokens == std::vector<std::string>{"a", "c"});
  CHECK(stub_logprobs("", "x y z").logprobs == std::vector<double>{-2.0, -2.0, -2.0});
  CHECK(stub_logprobs("The Cat", "the CAT").logprobs == std::vector<double>{-1.0, -1.0});
}

TEST_CASE("simplex validation") {
  CHECK(PolaritySimplex{0.2, 0.3, 0.5}.is_valid());
  CHECK(PolaritySimplex{0.2, 0.3, 0.5 + 5e-7}.is_valid());
  CHECK_FALSE(PolaritySimplex{0.2, 0.3, 0.5 + 2e-6}.is_valid());
  CHECK_FALSE(PolaritySimplex{-0.1, 0.6, 0.5}.is_valid());
  CHECK_FALSE(PolaritySimplex{std::nan(""), 0.5, 0.5}.is_valid());
}

TEST_CASE("golden stub requests reproduce bit for bit") {
  const auto lines = io::read_jsonl(support::fixtures() / "golden" / "stub_requests.jsonl");
  REQUIRE(lines.size() == 11);
  for (const auto& line : lines) {
    const auto& req = line["request"];
    const auto& want = line["response"];
    CAPTURE(req.dump());
    if (line["endpoint"] == "/v1/aspect-sentiment") {
      const auto text = req["text"].get<std::string>();
      const auto aspect = req["aspect"].get<std::string>();
      const text::Span span{byte_offset(text, req["aspect_char_span"][0]), byte_offset(text, req["aspect_char_span"][1])};
      CHECK(text.substr(span.begin, span.size()) == aspect);
      const AspectQuery q{text, aspect, span};
      CHECK(aspect_request_json(q) == req);
      const auto got = stub_aspect_sentiment(q.text);
      CHECK(same_bits(got.negative, want["negative"].get<double>()));
      CHECK(same_bits(got.neutral, want["neutral"].get<double>()));
      CHECK(same_bits(got.positive, want["positive"].get<double>()));
      CHECK(to_json(got).dump() == want.dump());
    } else {
      const auto got = stub_logprobs(req["context"].get<std::string>(), req["continuation"].get<std::string>());
      CHECK(got.tokens == want["tokens"].get<std::vector<std::string>>());
      CHECK(got.logprobs == want["token_logprobs"].get<std::vector<double>>());
    }
  }
}

TEST_CASE("retry helper") {
  int calls = 0;
  auto flaky = [&] {
    if (++calls < 3) throw TransientBackendError("flaky");
    return 7;
  };
  CHECK(call_with_retry(fast_retry(), flaky) == 7);
  CHECK(calls == 3);

  calls = 0;
  try {
    call_with_retry(fast_retry(2), [&]() -> int {
      ++calls;
      throw TransientBackendError("down");
    });
    FAIL("expected error");
  } catch (const TransientBackendError&) {
    FAIL("transient error leaked");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Backend);
    CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
  }
  CHECK(calls == 3);

  calls = 0;
  CHECK_THROWS_AS(call_with_retry(fast_retry(), [&]() -> int {
                    ++calls;
                    throw Error(ErrorKind::Backend, "permanent");
                  }),
                  Error);
  CHECK(calls == 1);
}

TEST_CASE("http client against a fake sidecar") {
  support::FakeSidecar sidecar;
  HttpBackend client(sidecar.url(), fast_retry());

  SUBCASE("happy path matches the in-process stub") {
    CHECK(client.model_id() == "stub-v1");
    const std::string text = "Déjà [NEG] it ended abruptly.";
    const AspectQuery q{text, "abruptly", {text.find("abruptly"), text.find("abruptly") + 8}};
    CHECK(client.score(q) == stub_aspect_sentiment(text));
    auto lp = client.logprobs("a b", "a c");
    CHECK(lp.logprobs == std::vector<double>{-1.0, -2.0});
  }
  SUBCASE("transient 503s are retried") {
    sidecar.fail_next = 2;
    const AspectQuery q{"x", "x", {0, 1}};
    CHECK(client.score(q).is_valid());
    CHECK(sidecar.requests == 3);
  }
  SUBCASE("persistent 503 gives up") {
    sidecar.status_override = 503;
    try {
      client.logprobs("a", "b");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Backend);
    }
    CHECK(sidecar.requests == 4);
  }
  SUBCASE("400 is not retried") {
    sidecar.status_override = 400;
    CHECK_THROWS_AS(client.score({"x", "x", {0, 1}}), Error);
    CHECK(sidecar.requests == 1);
  }
  SUBCASE("malformed log-prob responses are rejected") {
    sidecar.logprobs_override = [](const nlohmann::json&) {
      return nlohmann::json{{"tokens", {"a"}}, {"token_logprobs", {0.5}}};
    };
    CHECK_THROWS_AS(client.logprobs("a", "a"), Error);
    sidecar.logprobs_override = [](const nlohmann::json&) {
      return nlohmann::json{{"tokens", {"a", "b"}}, {"token_logprobs", {-1.0}}};
    };
    CHECK_THROWS_AS(client.logprobs("a", "a b"), Error);
  }
  SUBCASE("wire spans are code points") {
    nlohmann::json seen;
    sidecar.sentiment_override = [&](const nlohmann::json& body) {
      seen = body;
      return nlohmann::json{{"negative", 0.2}, {"neutral", 0.3}, {"positive", 0.5}};
    };
    const std::string text = "Café now";
    client.score({text, "now", {text.find("now"), text.size()}});
    CHECK(seen["aspect_char_span"] == nlohmann::json::array({5, 8}));
  }
}

TEST_CASE("unreachable sidecar") {
  HttpBackend client("http://127.0.0.1:1", fast_retry(1), std::chrono::seconds(1));
  try {
    client.model_id();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Backend);
    CHECK(std::string(e.what()).find("2 attempts") != std::string::npos);
  }
  CHECK_THROWS_AS(HttpBackend("https://example.org"), Error);
}
