#include "debate/provider/recording.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate::provider {

using Json = nlohmann::json;

namespace {

Json entry_to_json(const RecordingEntry& e) {
  Json j{{"kind", e.kind}, {"request_hash", e.request_hash}, {"latency_ms", e.latency_ms}};
  if (e.kind == "chat") {
    j["response"] = e.response;
    if (e.probs) j["probs"] = *e.probs;
  } else {
    j["embedding"] = e.embedding;
    j["model_tag"] = e.model_tag;
  }
  return j;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string embed_request_hash(std::string_view model_tag, std::string_view text) {
  std::string key(model_tag);
  key += '\x1f';
  key += text;
  return sha256_hex(key);
}

ProviderRecording ProviderRecording::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open recording " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto lines = text::split_lines(buf.str());
  ProviderRecording rec;
  bool header_seen = false;
  std::size_t line_no = 0;
  try {
    for (const auto& line : lines) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      const Json j = Json::parse(line);
      if (!header_seen) {
        if (j.value("format", "") != "debate-recording") throw ParseError("not a debate recording");
        if (j.value("schema_version", 0) != kRecordingVersion) throw ParseError("unsupported recording version");
        rec.provider_tag = j.at("provider_tag").get<std::string>();
        header_seen = true;
        continue;
      }
      RecordingEntry e;
      e.kind = j.at("kind").get<std::string>();
      e.request_hash = j.at("request_hash").get<std::string>();
      e.latency_ms = j.value("latency_ms", 0.0);
      if (e.kind == "chat") {
        e.response = j.at("response").get<std::string>();
        if (j.contains("probs")) e.probs = j.at("probs").get<TokenProbabilities>();
      } else if (e.kind == "embed") {
        e.embedding = j.at("embedding").get<std::vector<double>>();
        e.model_tag = j.at("model_tag").get<std::string>();
      } else {
        throw ParseError("unknown recording entry kind '" + e.kind + "'");
      }
      rec.entries.push_back(std::move(e));
    }
  } catch (const Json::exception& e) {
    throw ParseError("recording " + path.string() + " line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!header_seen) throw ParseError("recording " + path.string() + " has no header");
  return rec;
}

RecordingSink::RecordingSink(std::filesystem::path path, std::string provider_tag) : path_(std::move(path)) {
  const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
  if (fresh) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw ProviderError("cannot create recording " + path_.string());
    out << Json{{"format", "debate-recording"}, {"schema_version", kRecordingVersion}, {"provider_tag", provider_tag}}.dump()
        << '\n';
  }
}

void RecordingSink::append(const RecordingEntry& entry) {
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw ProviderError("cannot append to recording " + path_.string());
  out << entry_to_json(entry).dump() << '\n';
}

ChatReply RecordingChatProvider::complete(const ChatRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  auto reply = inner_.complete(request);
  RecordingEntry e;
  e.kind = "chat";
  e.request_hash = request_hash(request);
  e.response = reply.text;
  e.probs = reply.first_token_probs;
  e.latency_ms = elapsed_ms(start);
  sink_.append(e);
  return reply;
}

ReplayChatProvider::ReplayChatProvider(const ProviderRecording& recording)
    : provider_tag_(recording.provider_tag) {
  for (const auto& e : recording.entries) {
    if (e.kind == "chat") replies_[e.request_hash].push_back({e.response, e.probs});
  }
}

ChatReply ReplayChatProvider::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  const auto hash = request_hash(request);
  auto it = replies_.find(hash);
  if (it == replies_.end() || it->second.empty()) {
    throw ReplayMiss("no recorded reply for request " + hash.substr(0, 12) +
                     (request.origin.empty() ? "" : " from " + request.origin));
  }
  auto reply = std::move(it->second.front());
  it->second.pop_front();
  ++served_;
  return reply;
}

std::size_t ReplayChatProvider::served() const {
  std::lock_guard lock(mu_);
  return served_;
}

EmbeddingVector RecordingEmbedder::embed(std::string_view text) {
  const auto start = std::chrono::steady_clock::now();
  auto v = inner_.embed(text);
  RecordingEntry e;
  e.kind = "embed";
  e.request_hash = embed_request_hash(v.model_tag, text);
  e.embedding = v.values;
  e.model_tag = v.model_tag;
  e.latency_ms = elapsed_ms(start);
  sink_.append(e);
  return v;
}

ReplayEmbedder::ReplayEmbedder(const ProviderRecording& recording, std::string model_tag, std::size_t dimension)
    : model_tag_(std::move(model_tag)), dimension_(dimension) {
  for (const auto& e : recording.entries) {
    if (e.kind == "embed" && e.model_tag == model_tag_) vectors_[e.request_hash] = e.embedding;
  }
}

EmbeddingVector ReplayEmbedder::embed(std::string_view text) {
  const auto it = vectors_.find(embed_request_hash(model_tag_, text));
  if (it == vectors_.end()) throw ReplayMiss("no recorded embedding for text '" + text::first_words(text, 6) + "'");
  return {it->second, model_tag_};
}

}  // namespace debate::provider
