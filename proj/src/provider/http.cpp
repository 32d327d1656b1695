#include "debate/provider/http.hpp"

#include <atomic>
#include <cmath>

#include "httplib.h"
#include "json.hpp"

#include "debate/core/errors.hpp"

namespace debate::provider {

using Json = nlohmann::json;

namespace {

std::atomic<std::size_t> g_requests{0};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

SplitUrl split_url(const std::string& base) {
  const auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) throw PreconditionError("endpoint url needs a scheme: " + base);
  const auto path_start = base.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.origin = base;
  } else {
    out.origin = base.substr(0, path_start);
    out.path = base.substr(path_start);
  }
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

Json post_json(const HttpEndpoint& ep, const std::string& route, const Json& body) {
  if (ep.base_url.empty()) throw PreconditionError("endpoint url is not configured");
  const auto url = split_url(ep.base_url);
  httplib::Client cli(url.origin);
  const auto secs = static_cast<time_t>(std::ceil(ep.timeout_s));
  cli.set_connection_timeout(secs, 0);
  cli.set_read_timeout(secs, 0);
  cli.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);

  ++g_requests;
  auto res = cli.Post(url.path + route, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderError("request to " + url.origin + url.path + route + " failed: " + httplib::to_string(res.error()),
                        true);
  }
  if (res->status == 429 || res->status >= 500) {
    throw ProviderError("HTTP " + std::to_string(res->status) + " from " + route, true);
  }
  if (res->status != 200) {
    throw ProviderError("HTTP " + std::to_string(res->status) + " from " + route + ": " + res->body.substr(0, 300));
  }
  try {
    return Json::parse(res->body);
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("malformed JSON from ") + route + ": " + e.what());
  }
}

}  // namespace

std::size_t network_request_count() { return g_requests.load(); }

OpenAIChatProvider::OpenAIChatProvider(HttpEndpoint endpoint, bool request_logprobs)
    : endpoint_(std::move(endpoint)), request_logprobs_(request_logprobs) {}

ChatReply OpenAIChatProvider::complete(const ChatRequest& request) {
  Json body{{"model", endpoint_.model},
            {"messages", Json::array({Json{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;
  if (request_logprobs_) {
    body["logprobs"] = true;
    body["top_logprobs"] = 5;
  }
  const Json res = post_json(endpoint_, "/chat/completions", body);
  try {
    const auto& choice = res.at("choices").at(0);
    ChatReply reply;
    reply.text = choice.at("message").at("content").get<std::string>();
    if (choice.contains("logprobs") && choice["logprobs"].is_object() && choice["logprobs"].contains("content")) {
      const auto& content = choice["logprobs"]["content"];
      if (content.is_array() && !content.empty() && content[0].contains("top_logprobs")) {
        TokenProbabilities probs;
        for (const auto& alt : content[0]["top_logprobs"]) {
          probs[alt.at("token").get<std::string>()] += std::exp(alt.at("logprob").get<double>());
        }
        reply.first_token_probs = std::move(probs);
      }
    }
    return reply;
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("unexpected chat response shape: ") + e.what());
  }
}

OpenAIEmbedder::OpenAIEmbedder(HttpEndpoint endpoint, std::size_t dimension)
    : endpoint_(std::move(endpoint)), dimension_(dimension) {}

EmbeddingVector OpenAIEmbedder::embed(std::string_view text) {
  Json body{{"model", endpoint_.model}, {"input", std::string(text)}};
  const Json res = post_json(endpoint_, "/embeddings", body);
  EmbeddingVector v;
  try {
    v.values = res.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("unexpected embedding response shape: ") + e.what());
  }
  if (v.values.size() != dimension_) {
    throw ProviderError("embedding dimension " + std::to_string(v.values.size()) + " != configured " +
                        std::to_string(dimension_));
  }
  v.model_tag = model_tag();
  return v;
}

double HttpDurationEstimator::seconds(std::string_view text) {
  const Json res = post_json(endpoint_, "/duration", Json{{"text", std::string(text)}});
  try {
    return res.at("seconds").get<double>();
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("unexpected duration response: ") + e.what());
  }
}

}  // namespace debate::provider
