#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "debate/core/errors.hpp"
#include "debate/provider/chat.hpp"
#include "debate/provider/embed.hpp"
#include "debate/provider/recording.hpp"
#include "debate/timing/timing.hpp"

namespace debate::provider {

class ConfigError : public DebateError {
 public:
  using DebateError::DebateError;
};

struct ChatConfig {
  std::string kind = "simulated";  // simulated | openai
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  double timeout_s = 60.0;
  int retries = 2;
};

struct EmbeddingConfig {
  std::string kind = "token-hash";  // hash | token-hash | openai
  std::size_t dimension = 256;
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "text-embedding-3-small";
};

struct DurationConfig {
  std::string kind = "rate";  // rate | http
  double words_per_minute = timing::kDefaultWordsPerMinute;
  std::string endpoint;
};

/// Provider settings. API keys are never part of the file; they come from
/// DEBATE_API_KEY or OPENAI_API_KEY at bundle construction.
struct ProviderConfig {
  ChatConfig chat;
  EmbeddingConfig embedding;
  DurationConfig duration;

  /// Unknown kinds and non-positive numbers are ConfigErrors.
  void validate() const;

  static ProviderConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ProviderConfig load(const std::filesystem::path& path);
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// DEBATE_PROVIDER_KIND, DEBATE_ENDPOINT and DEBATE_MODEL override the chat
/// section.
void apply_env_overrides(ProviderConfig& config, const EnvLookup& env = process_env);

enum class RecordMode { Off, Record, Replay };

struct BundleOptions {
  RecordMode mode = RecordMode::Off;
  std::filesystem::path recording;
  EnvLookup env = process_env;
};

/// The providers a run uses, already wrapped: base (or replay) -> recording
/// -> retry -> call log for chat, a cache around the embedder.
class ProviderBundle {
 public:
  ProviderBundle(const ProviderConfig& config, const BundleOptions& options = {});
  ProviderBundle(const ProviderBundle&) = delete;
  ProviderBundle& operator=(const ProviderBundle&) = delete;

  ChatProvider& chat() { return *logging_; }
  Embedder& embedder() { return *embed_cache_; }
  timing::DurationEstimator& duration() { return *duration_; }
  CallLog& log() { return log_; }
  const ProviderConfig& config() const { return config_; }
  /// Provider tag of the underlying chat model (before replay).
  std::string chat_tag() const { return chat_tag_; }

 private:
  ProviderConfig config_;
  std::string chat_tag_;
  CallLog log_;
  std::unique_ptr<RecordingSink> sink_;
  std::unique_ptr<ProviderRecording> recording_;
  std::unique_ptr<ChatProvider> chat_base_;
  std::unique_ptr<ChatProvider> chat_record_;
  std::unique_ptr<ChatProvider> retrying_;
  std::unique_ptr<ChatProvider> logging_;
  std::unique_ptr<Embedder> embed_base_;
  std::unique_ptr<Embedder> embed_record_;
  std::unique_ptr<Embedder> embed_cache_;
  std::unique_ptr<timing::DurationEstimator> duration_;
};

}  // namespace debate::provider
