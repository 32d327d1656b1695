#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <thread>

#include "debate/provider/config.hpp"
#include "debate/provider/http.hpp"
#include "debate/provider/recording.hpp"
#include "debate/provider/simulated.hpp"
#include "debate/scoring/impact.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "stack.hpp"

using namespace debate;
using namespace debate::provider;
using namespace debate::testing;
using nlohmann::json;

namespace {

ChatRequest req(std::string prompt, std::int64_t seed = 1) {
  ChatRequest r;
  r.prompt = std::move(prompt);
  r.seed = seed;
  return r;
}

// Any prompt the simulated provider recognises.
std::string prompts_probe() {
  return scoring::PromptImpactScorer::render_prompt({{}, "parent claim", "child claim", scoring::Relation::Support});
}

std::optional<std::string> no_env(const std::string&) { return std::nullopt; }

// Minimal OpenAI-shaped server on a free local port.
class FakeOpenAI {
 public:
  FakeOpenAI() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& rq, httplib::Response& rs) {
      ++hits;
      last_body = json::parse(rq.body);
      auth = rq.get_header_value("Authorization");
      if (fail_next > 0) {
        --fail_next;
        rs.status = 503;
        return;
      }
      json reply = {{"choices",
                     {{{"message", {{"content", "1"}}},
                       {"logprobs",
                        {{"content",
                          {{{"token", "1"},
                            {"top_logprobs",
                             {{{"token", "1"}, {"logprob", std::log(0.5)}},
                              {{"token", "2"}, {"logprob", std::log(0.5)}}}}}}}}}}}}};
      rs.set_content(reply.dump(), "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& rs) {
      rs.set_content(json{{"data", {{{"embedding", {0.6, 0.8}}}}}}.dump(), "application/json");
    });
    server_.Post("/v1/duration", [](const httplib::Request&, httplib::Response& rs) {
      rs.set_content(R"({"seconds": 12.5})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeOpenAI() {
    server_.stop();
    thread_.join();
  }
  HttpEndpoint endpoint() const { return {"http://127.0.0.1:" + std::to_string(port_) + "/v1/", "m", "k", 5.0}; }

  int hits = 0;
  int fail_next = 0;
  json last_body;
  std::string auth;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(RequestHash, ExactAndStable) {
  EXPECT_EQ(request_hash(req("a")), request_hash(req("a")));
  EXPECT_NE(request_hash(req("a")), request_hash(req("a ")));
  EXPECT_NE(request_hash(req("a", 1)), request_hash(req("a", 2)));
  auto r = req("a");
  r.origin = "somewhere";
  EXPECT_EQ(request_hash(r), request_hash(req("a")));
  EXPECT_EQ(canonical_request(req("p")), R"({"max_tokens":2048,"prompt":"p","seed":1,"temperature":0.0})");
}

TEST(Scripted, ByHashThenFifo) {
  ScriptedChatProvider s;
  s.script(req("x"), "for x");
  s.script_any("any");
  EXPECT_EQ(s.chat(req("x")), "for x");
  EXPECT_EQ(s.chat(req("x")), "any");
  EXPECT_THROW(s.chat(req("x")), ReplayMiss);
  EXPECT_EQ(s.calls(), 3u);
}

TEST(Retrying, RetriesTransientOnly) {
  int calls = 0;
  FunctionChatProvider flaky([&](const ChatRequest&) -> ChatReply {
    if (++calls < 3) throw ProviderError("busy", true);
    return {"ok", std::nullopt};
  });
  RetryingChatProvider r(flaky, 2);
  EXPECT_EQ(r.chat(req("x")), "ok");
  EXPECT_EQ(r.attempts().size(), 3u);

  FunctionChatProvider hard([](const ChatRequest&) -> ChatReply { throw ProviderError("bad request"); });
  RetryingChatProvider h(hard, 5);
  EXPECT_THROW(h.chat(req("x")), ProviderError);
  EXPECT_EQ(h.attempts().size(), 1u);
}

TEST(Logging, RecordsEveryCall) {
  ScriptedChatProvider s;
  s.script_any("r1");
  CallLog log;
  LoggingChatProvider l(s, log);
  l.chat(req("p"));
  EXPECT_THROW(l.chat(req("q")), ReplayMiss);
  const auto recs = log.records();
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].response, "r1");
  EXPECT_FALSE(recs[1].error.empty());
  const auto lines = log.to_jsonl();
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
}

TEST(Recording, RecordThenReplay) {
  const auto dir = scratch_dir("recording");
  const auto path = dir / "rec.jsonl";
  SimulatedChatProvider sim;
  {
    RecordingSink sink(path, sim.tag());
    RecordingChatProvider rec(sim, sink);
    rec.chat(req(prompts_probe()));
  }
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(json::parse(header).at("format"), "debate-recording");

  const auto recording = ProviderRecording::load(path);
  ASSERT_EQ(recording.entries.size(), 1u);
  ReplayChatProvider replay(recording);
  EXPECT_EQ(replay.chat(req(prompts_probe())), sim.chat(req(prompts_probe())));
  EXPECT_THROW(replay.chat(req(prompts_probe())), ReplayMiss);  // consumed
  EXPECT_THROW(replay.chat(req("never recorded")), ReplayMiss);
  std::filesystem::remove_all(dir);
}

TEST(Recording, CorruptFileIsParseError) {
  const auto dir = scratch_dir("recording_bad");
  {
    std::ofstream out(dir / "bad.jsonl");
    out << "{\"format\":\"something else\"}\n";
  }
  EXPECT_THROW(ProviderRecording::load(dir / "bad.jsonl"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST(Simulated, DeterministicAndStrict) {
  SimulatedChatProvider a, b;
  const auto r = req(prompts_probe());
  EXPECT_EQ(a.chat(r), b.chat(r));
  EXPECT_THROW(a.chat(req("What is the capital of France?")), ProviderError);
}

TEST(Config, JsonRoundTripAndStrictness) {
  const auto c = ProviderConfig::load(fixture_path("provider_config.json"));
  EXPECT_EQ(c.chat.kind, "simulated");
  EXPECT_EQ(ProviderConfig::from_json(c.to_json()).to_json(), c.to_json());
  EXPECT_THROW(ProviderConfig::from_json(json{{"chat", {{"kind", "simulated"}, {"api_key", "sk-x"}}}}), ConfigError);
  EXPECT_THROW(ProviderConfig::from_json(json{{"colour", "blue"}}), ConfigError);
  EXPECT_THROW(ProviderConfig::from_json(json{{"chat", {{"kind", "telepathy"}}}}), ConfigError);
  EXPECT_THROW(ProviderConfig::from_json(json{{"duration", {{"words_per_minute", 0}}}}), ConfigError);
}

TEST(Config, EnvOverrides) {
  ProviderConfig c;
  apply_env_overrides(c, [](const std::string& k) -> std::optional<std::string> {
    if (k == "DEBATE_PROVIDER_KIND") return "openai";
    if (k == "DEBATE_MODEL") return "local-model";
    return std::nullopt;
  });
  EXPECT_EQ(c.chat.kind, "openai");
  EXPECT_EQ(c.chat.model, "local-model");
}

TEST(Bundle, LiveProviderNeedsKeyAndReplayRejectsHttpDuration) {
  ProviderConfig live;
  live.chat.kind = "openai";
  BundleOptions opts;
  opts.env = no_env;
  EXPECT_THROW(ProviderBundle(live, opts), ConfigError);

  ProviderConfig http_duration;
  http_duration.duration.kind = "http";
  http_duration.duration.endpoint = "http://127.0.0.1:1";
  BundleOptions replay;
  replay.mode = RecordMode::Replay;
  replay.recording = "/nonexistent";
  replay.env = no_env;
  EXPECT_THROW(ProviderBundle(http_duration, replay), ConfigError);
}

TEST(Http, ChatWithLogprobs) {
  FakeOpenAI fake;
  OpenAIChatProvider p(fake.endpoint());
  const auto before = network_request_count();
  const auto reply = p.complete(req("score this"));
  EXPECT_EQ(network_request_count() - before, 1u);
  EXPECT_EQ(reply.text, "1");
  ASSERT_TRUE(reply.first_token_probs);
  EXPECT_NEAR(reply.first_token_probs->at("2"), 0.5, 1e-9);
  EXPECT_EQ(fake.auth, "Bearer k");
  EXPECT_EQ(fake.last_body.at("model"), "m");
  EXPECT_EQ(fake.last_body.at("seed"), 1);
}

TEST(Http, TransientErrorsAreRetried) {
  FakeOpenAI fake;
  fake.fail_next = 1;
  OpenAIChatProvider p(fake.endpoint());
  RetryingChatProvider r(p, 2);
  EXPECT_EQ(r.chat(req("again")), "1");
  EXPECT_EQ(fake.hits, 2);
}

TEST(Http, EmbeddingsAndDuration) {
  FakeOpenAI fake;
  OpenAIEmbedder e(fake.endpoint(), 2);
  EXPECT_EQ(e.embed("x").values, (std::vector<double>{0.6, 0.8}));
  OpenAIEmbedder wrong(fake.endpoint(), 3);
  EXPECT_THROW(wrong.embed("x"), ProviderError);
  HttpDurationEstimator d(fake.endpoint());
  EXPECT_DOUBLE_EQ(d.seconds("hello"), 12.5);
}

TEST(Http, UnreachableIsTransient) {
  OpenAIChatProvider p({"http://127.0.0.1:1/v1", "m", "", 1.0});
  try {
    p.complete(req("x"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_TRUE(e.transient());
  }
}
