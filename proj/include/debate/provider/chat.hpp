#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/errors.hpp"

namespace debate::provider {

class ProviderError : public DebateError {
 public:
  ProviderError(const std::string& what, bool transient = false)
      : DebateError(what), transient_(transient) {}
  bool transient() const { return transient_; }

 private:
  bool transient_;
};

/// Replay/scripted lookup found no entry for the request hash.
class ReplayMiss : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

struct ChatRequest {
  std::string prompt;
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
  int max_tokens = 2048;
  /// Issuing module/stage, for logs only. Not part of the request hash.
  std::string origin;
};

/// Sorted-key JSON of the hashed fields (prompt, temperature, seed, max_tokens).
std::string canonical_request(const ChatRequest& request);
/// sha256 of canonical_request. Exact: any prompt edit changes it.
std::string request_hash(const ChatRequest& request);

using TokenProbabilities = std::map<std::string, double>;

struct ChatReply {
  std::string text;
  /// Probabilities of candidate first tokens, when the provider exposes them.
  std::optional<TokenProbabilities> first_token_probs;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  virtual ChatReply complete(const ChatRequest& request) = 0;
  virtual std::string tag() const = 0;

  /// complete() for callers that only need text; rejects empty replies.
  std::string chat(const ChatRequest& request);
};

/// Test double: replies are scripted per request hash and consumed in order.
/// A request with nothing left scripted is a ReplayMiss.
class ScriptedChatProvider : public ChatProvider {
 public:
  void script(const ChatRequest& request, std::string reply,
              std::optional<TokenProbabilities> probs = std::nullopt);
  /// Fallback replies served in FIFO order to requests without a hash entry.
  void script_any(std::string reply);

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return "scripted"; }

  std::size_t calls() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::deque<ChatReply>> by_hash_;
  std::deque<ChatReply> any_;
  std::size_t calls_ = 0;
};

/// Retries transient ProviderErrors up to `retries` extra attempts.
class RetryingChatProvider : public ChatProvider {
 public:
  struct Attempt {
    std::string request_hash;
    int attempt = 0;
    bool ok = false;
    std::string error;
  };

  RetryingChatProvider(ChatProvider& inner, int retries = 2,
                       std::chrono::milliseconds backoff = std::chrono::milliseconds(0));

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return inner_.tag(); }

  std::vector<Attempt> attempts() const;

 private:
  ChatProvider& inner_;
  int retries_;
  std::chrono::milliseconds backoff_;
  mutable std::mutex mu_;
  std::vector<Attempt> attempts_;
};

struct CallRecord {
  std::string origin;
  std::string request_hash;
  std::string prompt;
  std::string response;
  std::string error;
  double latency_ms = 0.0;
};

/// Thread-safe in-memory log of every request/response pair.
class CallLog {
 public:
  void add(CallRecord record);
  std::vector<CallRecord> records() const;
  std::size_t size() const;
  /// One JSON object per line.
  std::string to_jsonl() const;

 private:
  mutable std::mutex mu_;
  std::vector<CallRecord> records_;
};

class LoggingChatProvider : public ChatProvider {
 public:
  LoggingChatProvider(ChatProvider& inner, CallLog& log) : inner_(inner), log_(log) {}

  ChatReply complete(const ChatRequest& request) override;
  std::string tag() const override { return inner_.tag(); }

 private:
  ChatProvider& inner_;
  CallLog& log_;
};

/// Wraps a plain function; handy for fault injection in tests.
class FunctionChatProvider : public ChatProvider {
 public:
  using Fn = std::function<ChatReply(const ChatRequest&)>;
  FunctionChatProvider(Fn fn, std::string tag = "function") : fn_(std::move(fn)), tag_(std::move(tag)) {}

  ChatReply complete(const ChatRequest& request) override { return fn_(request); }
  std::string tag() const override { return tag_; }

 private:
  Fn fn_;
  std::string tag_;
};

}  // namespace debate::provider
