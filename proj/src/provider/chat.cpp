#include "debate/provider/chat.hpp"

#include <thread>

#include "json.hpp"

#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate::provider {

using Json = nlohmann::json;

std::string canonical_request(const ChatRequest& request) {
  Json j;
  j["prompt"] = request.prompt;
  j["temperature"] = request.temperature;
  j["max_tokens"] = request.max_tokens;
  if (request.seed) {
    j["seed"] = *request.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j.dump();
}

std::string request_hash(const ChatRequest& request) { return sha256_hex(canonical_request(request)); }

std::string ChatProvider::chat(const ChatRequest& request) {
  if (text::trim(request.prompt).empty()) throw PreconditionError("chat: prompt must be nonempty");
  auto reply = complete(request);
  if (text::trim(reply.text).empty()) throw ProviderError("provider '" + tag() + "' returned an empty reply");
  return std::move(reply.text);
}

void ScriptedChatProvider::script(const ChatRequest& request, std::string reply,
                                  std::optional<TokenProbabilities> probs) {
  std::lock_guard lock(mu_);
  by_hash_[request_hash(request)].push_back({std::move(reply), std::move(probs)});
}

void ScriptedChatProvider::script_any(std::string reply) {
  std::lock_guard lock(mu_);
  any_.push_back({std::move(reply), std::nullopt});
}

ChatReply ScriptedChatProvider::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  ++calls_;
  const auto hash = request_hash(request);
  if (auto it = by_hash_.find(hash); it != by_hash_.end() && !it->second.empty()) {
    auto reply = std::move(it->second.front());
    it->second.pop_front();
    return reply;
  }
  if (!any_.empty()) {
    auto reply = std::move(any_.front());
    any_.pop_front();
    return reply;
  }
  throw ReplayMiss("scripted provider has no reply for request " + hash.substr(0, 12) +
                   (request.origin.empty() ? "" : " from " + request.origin));
}

std::size_t ScriptedChatProvider::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t ScriptedChatProvider::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = any_.size();
  for (const auto& [_, q] : by_hash_) n += q.size();
  return n;
}

RetryingChatProvider::RetryingChatProvider(ChatProvider& inner, int retries,
                                           std::chrono::milliseconds backoff)
    : inner_(inner), retries_(retries), backoff_(backoff) {
  if (retries < 0) throw PreconditionError("retry count must be >= 0");
}

ChatReply RetryingChatProvider::complete(const ChatRequest& request) {
  const auto hash = request_hash(request);
  for (int attempt = 1;; ++attempt) {
    try {
      auto reply = inner_.complete(request);
      std::lock_guard lock(mu_);
      attempts_.push_back({hash, attempt, true, {}});
      return reply;
    } catch (const ProviderError& e) {
      {
        std::lock_guard lock(mu_);
        attempts_.push_back({hash, attempt, false, e.what()});
      }
      if (!e.transient() || attempt > retries_) throw;
      if (backoff_.count() > 0) std::this_thread::sleep_for(backoff_ * attempt);
    }
  }
}

std::vector<RetryingChatProvider::Attempt> RetryingChatProvider::attempts() const {
  std::lock_guard lock(mu_);
  return attempts_;
}

void CallLog::add(CallRecord record) {
  std::lock_guard lock(mu_);
  records_.push_back(std::move(record));
}

std::vector<CallRecord> CallLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t CallLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::string CallLog::to_jsonl() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& r : records_) {
    Json j{{"origin", r.origin},
           {"request_hash", r.request_hash},
           {"prompt", r.prompt},
           {"response", r.response},
           {"latency_ms", r.latency_ms}};
    if (!r.error.empty()) j["error"] = r.error;
    out += j.dump();
    out += '\n';
  }
  return out;
}

ChatReply LoggingChatProvider::complete(const ChatRequest& request) {
  CallRecord rec;
  rec.origin = request.origin;
  rec.request_hash = request_hash(request);
  rec.prompt = request.prompt;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto reply = inner_.complete(request);
    rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.response = reply.text;
    log_.add(std::move(rec));
    return reply;
  } catch (const std::exception& e) {
    rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.error = e.what();
    log_.add(std::move(rec));
    throw;
  }
}

}  // namespace debate::provider
