#include "sumtag/http_backend.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>

namespace sumtag {
namespace {

using json = nlohmann::json;
using namespace std::chrono_literals;

// Minimal chat-completion server on a loopback port.
class FakeServer {
 public:
  FakeServer() {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   handle(req, res);
                 });
    server_.Post("/api/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   handle(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  // Statuses returned before the first success, in order.
  void fail_with(std::vector<int> statuses) {
    std::lock_guard lock(mu_);
    failures_ = std::move(statuses);
  }
  void reply_body(std::string body) {
    std::lock_guard lock(mu_);
    body_ = std::move(body);
  }

  std::atomic<int> hits{0};
  json last_request;
  std::string last_auth;
  std::string last_path;

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu_);
    const int n = hits++;
    last_request = json::parse(req.body);
    last_auth = req.get_header_value("Authorization");
    last_path = req.path;
    if (static_cast<std::size_t>(n) < failures_.size()) {
      res.status = failures_[n];
      res.set_content("{\"error\":\"nope\"}", "application/json");
      return;
    }
    res.set_content(body_, "application/json");
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<int> failures_;
  std::string body_ =
      R"({"choices":[{"index":0,"message":{"role":"assistant","content":" 新的算法。 "}}]})";
};

GenerationParams params(std::size_t retries = 0) {
  GenerationParams p;
  p.retries = retries;
  p.initial_backoff = 0ms;
  p.timeout = 5000ms;
  p.max_new_tokens = 64;
  return p;
}

GenerationRequest request() {
  return {"d1", "body", "Summarize: body", std::string("You are terse.")};
}

TEST(ChatWire, RequestShape) {
  auto body = json::parse(build_chat_request("m", request(), params()));
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["temperature"], 0.0);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["messages"][1]["content"], "Summarize: body");

  auto no_system = request();
  no_system.system_preamble.reset();
  EXPECT_EQ(json::parse(build_chat_request("m", no_system, params()))["messages"].size(), 1u);
}

TEST(ChatWire, ParseResponse) {
  EXPECT_EQ(parse_chat_response(R"({"choices":[{"message":{"content":"hi"}}]})"), "hi");
  for (const char* bad : {"not json", "{}", R"({"choices":[]})",
                          R"({"choices":[{"message":{"content":3}}]})"}) {
    try {
      parse_chat_response(bad);
      FAIL() << bad;
    } catch (const BackendError& e) {
      EXPECT_EQ(e.kind(), BackendErrorKind::kInvalidResponse) << bad;
    }
  }
}

TEST(HttpChatBackend, RejectsBadConfig) {
  EXPECT_THROW(HttpChatBackend({"localhost:80", "m", {}}), std::invalid_argument);
  EXPECT_THROW(HttpChatBackend({"ftp://h", "m", {}}), std::invalid_argument);
  EXPECT_THROW(HttpChatBackend({"http://h", "", {}}), std::invalid_argument);
}

TEST(HttpChatBackend, RoundTripWithBearer) {
  FakeServer server;
  HttpChatBackend backend({server.url(), "llama3-sum", std::string("secret")});
  auto g = generate_with_retry(backend, request(), params());
  EXPECT_EQ(g.text, "新的算法。");
  EXPECT_EQ(server.last_auth, "Bearer secret");
  EXPECT_EQ(server.last_request["model"], "llama3-sum");
  EXPECT_EQ(server.last_request["messages"][1]["content"], "Summarize: body");
}

TEST(HttpChatBackend, PathPrefixAndNoKey) {
  FakeServer server;
  HttpChatBackend backend({server.url() + "/api/", "m", {}});
  generate_with_retry(backend, request(), params());
  EXPECT_EQ(server.last_path, "/api/v1/chat/completions");
  EXPECT_EQ(server.last_auth, "");
}

TEST(HttpChatBackend, ServerErrorRetriedThenTransport) {
  FakeServer server;
  server.fail_with({500, 500, 500});
  HttpChatBackend backend({server.url(), "m", {}});
  try {
    generate_with_retry(backend, request(), params(1));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kTransport);
    EXPECT_EQ(e.http_status(), 500);
    EXPECT_EQ(e.attempts(), 2u);
  }
  EXPECT_EQ(server.hits.load(), 2);
}

TEST(HttpChatBackend, RecoversAfter503) {
  FakeServer server;
  server.fail_with({503});
  HttpChatBackend backend({server.url(), "m", {}});
  EXPECT_EQ(generate_with_retry(backend, request(), params(2)).text, "新的算法。");
  EXPECT_EQ(server.hits.load(), 2);
}

TEST(HttpChatBackend, ClientErrorNotRetried) {
  FakeServer server;
  server.fail_with({400, 400});
  HttpChatBackend backend({server.url(), "m", {}});
  try {
    generate_with_retry(backend, request(), params(3));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kHttpStatus);
    EXPECT_EQ(e.http_status(), 400);
  }
  EXPECT_EQ(server.hits.load(), 1);
}

TEST(HttpChatBackend, EmptyContentIsEmptyGeneration) {
  FakeServer server;
  server.reply_body(R"({"choices":[{"message":{"content":"   "}}]})");
  HttpChatBackend backend({server.url(), "m", {}});
  try {
    generate_with_retry(backend, request(), params());
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kEmptyGeneration);
  }
}

TEST(HttpChatBackend, UnreachableServerIsTransport) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpChatBackend backend({"http://127.0.0.1:" + std::to_string(port), "m", {}});
  auto p = params(1);
  p.timeout = 300ms;
  try {
    generate_with_retry(backend, request(), p);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kTransport);
    EXPECT_EQ(e.attempts(), 2u);
  }
}

}  // namespace
}  // namespace sumtag
