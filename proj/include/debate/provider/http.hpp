#pragma once

#include <cstddef>
#include <string>

#include "debate/provider/chat.hpp"
#include "debate/provider/embed.hpp"
#include "debate/timing/timing.hpp"

namespace debate::provider {

struct HttpEndpoint {
  /// e.g. "https://api.openai.com/v1"
  std::string base_url;
  std::string model;
  /// Read from the environment by the config loader, never from files.
  std::string api_key;
  double timeout_s = 60.0;
};

/// Every outbound HTTP request made by the providers below. Replay runs must
/// leave it untouched.
std::size_t network_request_count();

/// OpenAI-compatible /chat/completions client. Asks for top logprobs so
/// single-token classification replies carry a distribution.
class OpenAIChatProvider : public ChatProvider {
 public:
  explicit OpenAIChatProvider(HttpEndpoint endpoint, bool request_logprobs = true);

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return "openai:" + endpoint_.model; }

 private:
  HttpEndpoint endpoint_;
  bool request_logprobs_;
};

/// OpenAI-compatible /embeddings client.
class OpenAIEmbedder : public Embedder {
 public:
  OpenAIEmbedder(HttpEndpoint endpoint, std::size_t dimension);

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override { return "openai:" + endpoint_.model; }
  std::size_t dimension() const override { return dimension_; }

 private:
  HttpEndpoint endpoint_;
  std::size_t dimension_;
};

/// Posts {"text": ...} to a speech-duration service and reads {"seconds": x}.
class HttpDurationEstimator : public timing::DurationEstimator {
 public:
  explicit HttpDurationEstimator(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

  double seconds(std::string_view text) override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace debate::provider
