#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "debate/provider/chat.hpp"
#include "debate/provider/embed.hpp"

// Recording file: JSON Lines, append-only. The first line is a header
//   {"format":"debate-recording","provider_tag":...,"schema_version":1}
// and every following line is one entry:
//   {"kind":"chat","request_hash":...,"response":...,"latency_ms":...[,"probs":{...}]}
//   {"kind":"embed","request_hash":...,"embedding":[...],"model_tag":...,"latency_ms":...}
namespace debate::provider {

inline constexpr int kRecordingVersion = 1;

struct RecordingEntry {
  std::string kind;  // "chat" or "embed"
  std::string request_hash;
  std::string response;
  std::optional<TokenProbabilities> probs;
  std::vector<double> embedding;
  std::string model_tag;
  double latency_ms = 0.0;
};

struct ProviderRecording {
  std::string provider_tag;
  std::vector<RecordingEntry> entries;

  static ProviderRecording load(const std::filesystem::path& path);
};

/// Hash for an embedding request: model tag plus exact text.
std::string embed_request_hash(std::string_view model_tag, std::string_view text);

/// Appends entries to a recording file under a lock.
class RecordingSink {
 public:
  RecordingSink(std::filesystem::path path, std::string provider_tag);

  void append(const RecordingEntry& entry);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::mutex mu_;
  std::filesystem::path path_;
};

class RecordingChatProvider : public ChatProvider {
 public:
  RecordingChatProvider(ChatProvider& inner, RecordingSink& sink) : inner_(inner), sink_(sink) {}

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return inner_.tag(); }

 private:
  ChatProvider& inner_;
  RecordingSink& sink_;
};

/// Serves recorded replies by request hash. Never falls back to a live
/// provider: an unrecorded request is a ReplayMiss.
class ReplayChatProvider : public ChatProvider {
 public:
  explicit ReplayChatProvider(const ProviderRecording& recording);

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return "replay:" + provider_tag_; }

  std::size_t served() const;

 private:
  mutable std::mutex mu_;
  std::string provider_tag_;
  std::map<std::string, std::deque<ChatReply>> replies_;
  std::size_t served_ = 0;
};

class RecordingEmbedder : public Embedder {
 public:
  RecordingEmbedder(Embedder& inner, RecordingSink& sink) : inner_(inner), sink_(sink) {}

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override { return inner_.model_tag(); }
  std::size_t dimension() const override { return inner_.dimension(); }

 private:
  Embedder& inner_;
  RecordingSink& sink_;
};

/// Embedding replay. Recorded vectors are reusable (embeddings are pure).
class ReplayEmbedder : public Embedder {
 public:
  ReplayEmbedder(const ProviderRecording& recording, std::string model_tag, std::size_t dimension);

  EmbeddingVector embed(std::string_view text) override;
  std::string model_tag() const override { return model_tag_; }
  std::size_t dimension() const override { return dimension_; }

 private:
  std::string model_tag_;
  std::size_t dimension_;
  std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace debate::provider
