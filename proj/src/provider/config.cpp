#include "debate/provider/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "debate/provider/http.hpp"
#include "debate/provider/simulated.hpp"

namespace debate::provider {

using Json = nlohmann::json;

namespace {

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const auto* n : known) ok = ok || k == n;
    if (!ok) throw ConfigError("config: unknown key '" + k + "' in " + where);
  }
}

std::string api_key(const EnvLookup& env) {
  if (auto k = env("DEBATE_API_KEY")) return *k;
  if (auto k = env("OPENAI_API_KEY")) return *k;
  return {};
}

}  // namespace

void ProviderConfig::validate() const {
  if (chat.kind != "simulated" && chat.kind != "openai") throw ConfigError("config: unknown chat kind '" + chat.kind + "'");
  if (chat.timeout_s <= 0) throw ConfigError("config: chat.timeout_s must be positive");
  if (chat.retries < 0) throw ConfigError("config: chat.retries must be >= 0");
  if (embedding.kind != "hash" && embedding.kind != "token-hash" && embedding.kind != "openai") {
    throw ConfigError("config: unknown embedding kind '" + embedding.kind + "'");
  }
  if (embedding.dimension == 0) throw ConfigError("config: embedding.dimension must be positive");
  if (duration.kind != "rate" && duration.kind != "http") {
    throw ConfigError("config: unknown duration kind '" + duration.kind + "'");
  }
  if (duration.words_per_minute <= 0) throw ConfigError("config: duration.words_per_minute must be positive");
  if (duration.kind == "http" && duration.endpoint.empty()) throw ConfigError("config: duration.endpoint is required");
}

ProviderConfig ProviderConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j, {"chat", "embedding", "duration"}, "config");
  ProviderConfig c;
  if (j.contains("chat")) {
    const auto& s = j.at("chat");
    reject_unknown(s, {"kind", "endpoint", "model", "timeout_s", "retries", "api_key"}, "chat");
    if (s.contains("api_key")) throw ConfigError("config: api keys belong in DEBATE_API_KEY, not the config file");
    read_opt(s, "kind", c.chat.kind);
    read_opt(s, "endpoint", c.chat.endpoint);
    read_opt(s, "model", c.chat.model);
    read_opt(s, "timeout_s", c.chat.timeout_s);
    read_opt(s, "retries", c.chat.retries);
  }
  if (j.contains("embedding")) {
    const auto& s = j.at("embedding");
    reject_unknown(s, {"kind", "dimension", "endpoint", "model"}, "embedding");
    read_opt(s, "kind", c.embedding.kind);
    read_opt(s, "dimension", c.embedding.dimension);
    read_opt(s, "endpoint", c.embedding.endpoint);
    read_opt(s, "model", c.embedding.model);
  }
  if (j.contains("duration")) {
    const auto& s = j.at("duration");
    reject_unknown(s, {"kind", "words_per_minute", "endpoint"}, "duration");
    read_opt(s, "kind", c.duration.kind);
    read_opt(s, "words_per_minute", c.duration.words_per_minute);
    read_opt(s, "endpoint", c.duration.endpoint);
  }
  c.validate();
  return c;
}

Json ProviderConfig::to_json() const {
  return Json{{"chat",
               {{"kind", chat.kind},
                {"endpoint", chat.endpoint},
                {"model", chat.model},
                {"timeout_s", chat.timeout_s},
                {"retries", chat.retries}}},
              {"embedding",
               {{"kind", embedding.kind},
                {"dimension", embedding.dimension},
                {"endpoint", embedding.endpoint},
                {"model", embedding.model}}},
              {"duration",
               {{"kind", duration.kind},
                {"words_per_minute", duration.words_per_minute},
                {"endpoint", duration.endpoint}}}};
}

ProviderConfig ProviderConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(Json::parse(ss.str()));
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v && *v) return std::string(v);
  return std::nullopt;
}

void apply_env_overrides(ProviderConfig& config, const EnvLookup& env) {
  if (auto v = env("DEBATE_PROVIDER_KIND")) config.chat.kind = *v;
  if (auto v = env("DEBATE_ENDPOINT")) config.chat.endpoint = *v;
  if (auto v = env("DEBATE_MODEL")) config.chat.model = *v;
  config.validate();
}

ProviderBundle::ProviderBundle(const ProviderConfig& config, const BundleOptions& options) : config_(config) {
  config_.validate();
  const auto key = api_key(options.env ? options.env : EnvLookup(process_env));

  if (config_.chat.kind == "openai") {
    chat_tag_ = "openai:" + config_.chat.model;
  } else {
    chat_tag_ = SimulatedChatProvider().tag();
  }

  const auto make_embedder = [&]() -> std::unique_ptr<Embedder> {
    if (config_.embedding.kind == "hash") return std::make_unique<HashEmbedder>(config_.embedding.dimension);
    if (config_.embedding.kind == "token-hash") return std::make_unique<TokenHashEmbedder>(config_.embedding.dimension);
    return std::make_unique<OpenAIEmbedder>(
        HttpEndpoint{config_.embedding.endpoint, config_.embedding.model, key, config_.chat.timeout_s},
        config_.embedding.dimension);
  };

  ChatProvider* chat_top = nullptr;
  Embedder* embed_top = nullptr;
  if (options.mode == RecordMode::Replay) {
    if (options.recording.empty()) throw ConfigError("replay needs a recording path");
    if (config_.duration.kind == "http") throw ConfigError("replay cannot use the http duration service");
    recording_ = std::make_unique<ProviderRecording>(ProviderRecording::load(options.recording));
    chat_base_ = std::make_unique<ReplayChatProvider>(*recording_);
    chat_top = chat_base_.get();
    if (config_.embedding.kind == "openai") {
      embed_base_ = std::make_unique<ReplayEmbedder>(*recording_, "openai:" + config_.embedding.model,
                                                     config_.embedding.dimension);
    } else {
      embed_base_ = make_embedder();
    }
    embed_top = embed_base_.get();
  } else {
    if (config_.chat.kind == "openai") {
      if (key.empty()) throw ConfigError("openai provider needs DEBATE_API_KEY or OPENAI_API_KEY");
      chat_base_ = std::make_unique<OpenAIChatProvider>(
          HttpEndpoint{config_.chat.endpoint, config_.chat.model, key, config_.chat.timeout_s});
    } else {
      chat_base_ = std::make_unique<SimulatedChatProvider>();
    }
    embed_base_ = make_embedder();
    chat_top = chat_base_.get();
    embed_top = embed_base_.get();
    if (options.mode == RecordMode::Record) {
      if (options.recording.empty()) throw ConfigError("record needs a recording path");
      sink_ = std::make_unique<RecordingSink>(options.recording, chat_tag_);
      chat_record_ = std::make_unique<RecordingChatProvider>(*chat_base_, *sink_);
      chat_top = chat_record_.get();
      if (config_.embedding.kind == "openai") {
        embed_record_ = std::make_unique<RecordingEmbedder>(*embed_base_, *sink_);
        embed_top = embed_record_.get();
      }
    }
  }
  // Replay misses are permanent, so retrying only ever repeats transient
  // live failures.
  retrying_ = std::make_unique<RetryingChatProvider>(*chat_top, config_.chat.retries);
  logging_ = std::make_unique<LoggingChatProvider>(*retrying_, log_);
  embed_cache_ = std::make_unique<CachingEmbedder>(*embed_top);

  if (config_.duration.kind == "http") {
    duration_ = std::make_unique<HttpDurationEstimator>(
        HttpEndpoint{config_.duration.endpoint, "", key, config_.chat.timeout_s});
  } else {
    duration_ = std::make_unique<timing::RateEstimator>(config_.duration.words_per_minute);
  }
}

}  // namespace debate::provider
