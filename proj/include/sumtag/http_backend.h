#pragma once

#include <optional>
#include <string>

#include "sumtag/backend.h"

namespace sumtag {

struct HttpBackendConfig {
  // Scheme, host, optional port and optional path prefix, e.g.
  // "http://127.0.0.1:8000" or "https://host/api". The request goes to
  // base_url + "/v1/chat/completions".
  std::string base_url;
  std::string model;
  std::optional<std::string> api_key;  // sent as a bearer token when set
};

// Environment variable consulted for the bearer token by the CLI.
inline constexpr const char* kApiKeyEnv = "SUMTAG_API_KEY";

// Client for an OpenAI-compatible chat-completion endpoint. Sends
//   {model, messages: [{role, content}], max_tokens, temperature}
// and reads choices[0].message.content.
class HttpChatBackend : public Backend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);

  std::string name() const override { return "http:" + config_.model; }
  std::string generate(const GenerationRequest& request,
                       const GenerationParams& params) override;

  const HttpBackendConfig& config() const { return config_; }

 private:
  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

// Request body for one chat-completion call.
std::string build_chat_request(const std::string& model,
                               const GenerationRequest& request,
                               const GenerationParams& params);

// Extracts choices[0].message.content; throws BackendError(kInvalidResponse).
std::string parse_chat_response(const std::string& body);

}  // namespace sumtag
