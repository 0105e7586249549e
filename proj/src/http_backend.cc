#include "sumtag/http_backend.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

namespace sumtag {
namespace {

using json = nlohmann::json;

constexpr std::size_t kBodyExcerpt = 200;

std::string excerpt(const std::string& body) {
  if (body.size() <= kBodyExcerpt) return body;
  return body.substr(0, kBodyExcerpt) + "...";
}

bool retriable_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

}  // namespace

HttpChatBackend::HttpChatBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("base_url needs a scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("unsupported scheme in base_url: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  std::string prefix =
      path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/v1/chat/completions";
  if (config_.model.empty()) {
    throw std::invalid_argument("http backend needs a model name");
  }
}

std::string build_chat_request(const std::string& model,
                               const GenerationRequest& request,
                               const GenerationParams& params) {
  json messages = json::array();
  if (request.system_preamble) {
    messages.push_back({{"role", "system"}, {"content", *request.system_preamble}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  json body = {
      {"model", model},
      {"messages", std::move(messages)},
      {"max_tokens", params.max_new_tokens},
      {"temperature", params.temperature},
  };
  return body.dump();
}

std::string parse_chat_response(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw BackendError(BackendErrorKind::kInvalidResponse,
                       "response is not JSON: " + excerpt(body));
  }
  const auto invalid = [&](const std::string& why) {
    return BackendError(BackendErrorKind::kInvalidResponse,
                        why + ": " + excerpt(body));
  };
  if (!doc.is_object() || !doc.contains("choices") ||
      !doc["choices"].is_array() || doc["choices"].empty()) {
    throw invalid("response has no choices");
  }
  const json& choice = doc["choices"][0];
  if (!choice.is_object() || !choice.contains("message") ||
      !choice["message"].is_object()) {
    throw invalid("first choice has no message");
  }
  const json& content = choice["message"].value("content", json());
  if (content.is_null()) return "";
  if (!content.is_string()) throw invalid("message content is not a string");
  return content.get<std::string>();
}

std::string HttpChatBackend::generate(const GenerationRequest& request,
                                      const GenerationParams& params) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(params.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      params.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (config_.api_key && !config_.api_key->empty()) {
    headers.emplace("Authorization", "Bearer " + *config_.api_key);
  }
  const std::string body = build_chat_request(config_.model, request, params);
  auto result = client.Post(path_, headers, body, "application/json");
  if (!result) {
    throw BackendError(BackendErrorKind::kTransport,
                       "request to " + scheme_host_port_ + path_ +
                           " failed: " + httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status < 200 || status >= 300) {
    const std::string message = "HTTP " + std::to_string(status) + " from " +
                                scheme_host_port_ + path_ + ": " +
                                excerpt(result->body);
    throw BackendError(retriable_status(status) ? BackendErrorKind::kTransport
                                                : BackendErrorKind::kHttpStatus,
                       message, status);
  }
  return parse_chat_response(result->body);
}

}  // namespace sumtag
