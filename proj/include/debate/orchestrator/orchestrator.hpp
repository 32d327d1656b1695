#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "debate/audience/audience.hpp"
#include "debate/core/state.hpp"
#include "debate/corpus/corpus.hpp"
#include "debate/flow/flow.hpp"
#include "debate/orchestrator/validity.hpp"
#include "debate/provider/chat.hpp"
#include "debate/provider/embed.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "debate/scoring/impact.hpp"
#include "debate/semantic/semantic.hpp"
#include "debate/timing/timing.hpp"

namespace debate::orchestrator {

struct StagePipelineConfig {
  double words_per_minute = timing::kDefaultWordsPerMinute;
  std::map<Stage, double> time_limits{{Stage::Opening, 240.0}, {Stage::Rebuttal, 240.0}, {Stage::Closing, 120.0}};
  double lower_fraction = 0.95;
  int revision_cycles = 1;
  std::map<Stage, std::string> templates{
      {Stage::Opening, "opening"}, {Stage::Rebuttal, "rebuttal"}, {Stage::Closing, "closing"}};
  double theta = semantic::kDefaultThreshold;
  double retrieval_theta = semantic::kDefaultThreshold;
  RehearsalParams rehearsal;
  int main_claims = 5;
  int max_iter = 10;
  /// Limit Rebut candidates to leaves the opponent added in their last speech.
  bool rebut_recent_only = true;
  std::int64_t seed = 0;

  /// Throws PreconditionError when a value is outside its range.
  void validate() const;
  double limit(Stage s) const { return time_limits.at(s); }
  timing::TimeRange range(Stage s) const { return timing::TimeRange::for_limit(limit(s), lower_fraction); }
  /// Rate times the stage limit, rounded.
  int word_budget(Stage s) const;

  nlohmann::json to_json() const;
  static StagePipelineConfig from_json(const nlohmann::json& j);
};

/// Progress callback: phase name ("prepare", "candidates", "draft", ...)
/// for the side and stage being worked on.
using EventSink = std::function<void(const std::string& phase, Stance side, Stage stage)>;

struct Collaborators {
  provider::ChatProvider& chat;
  rehearsal::ArgumentGenerator& generator;
  scoring::ImpactScorer& scorer;
  flow::ActionExtractor& extractor;
  semantic::ClaimMatcher& matcher;
  timing::DurationEstimator& duration;
  /// Both needed for audience retrieval; without them feedback runs unconditioned.
  provider::Embedder* embedder = nullptr;
  const corpus::CorpusIndex* corpus = nullptr;
  EventSink events;
};

/// Everything one engine speech produced on its way to the final text.
struct StageRecord {
  int turn = 0;
  Stance side = Stance::Pro;
  Stage stage = Stage::Opening;
  int k = 0;
  int word_budget = 0;
  std::vector<Battlefield> battlefields;
  Statement draft;
  std::vector<audience::AudienceFeedback> feedback;
  std::optional<std::string> retrieved_corpus_id;
  timing::FitTrace fit;
  bool hard_cut = false;
  Statement statement;
  ValidityReport validity;

  bool operator==(const StageRecord&) const = default;
};

nlohmann::json to_json(const StageRecord& r);
StageRecord stage_record_from_json(const nlohmann::json& j);

/// Revises toward a word budget with the length-adjustment template.
class ChatReviser : public timing::Reviser {
 public:
  ChatReviser(provider::ChatProvider& chat, Motion motion, Stance side, Stage stage, std::int64_t seed)
      : chat_(chat), motion_(std::move(motion)), side_(side), stage_(stage), seed_(seed) {}

  std::string revise(const std::string& statement, int word_budget) override;

 private:
  provider::ChatProvider& chat_;
  Motion motion_;
  Stance side_;
  Stage stage_;
  std::int64_t seed_;
  int calls_ = 0;
};

class DebateEngine {
 public:
  DebateEngine(StagePipelineConfig config, Collaborators collaborators);

  const StagePipelineConfig& config() const { return config_; }

  /// Builds the side's own and opponent anticipation forests and asks for
  /// the topic definition, unless already present in the state.
  void prepare(DebateState& state, Stance side);

  /// Picks the main claims from the prepared forest (once per side).
  void select_claims(DebateState& state, Stance side);

  /// Runs the next scheduled speech for the engine. Does not touch the
  /// transcript; pass the result's statement to accept().
  StageRecord run_stage(DebateState& state);

  /// Extracts the statement's actions and applies them to both views, then
  /// appends it to the transcript. It must be the next scheduled slot.
  std::vector<flow::ApplyRecord> accept(DebateState& state, Statement statement);

  /// run_stage followed by accept.
  StageRecord step(DebateState& state);

 private:
  void emit(const std::string& phase, Stance side, Stage stage) const;
  std::vector<CandidateAction> candidates(const DebateState& state, Stance side, Stage stage) const;
  std::string draft_prompt(const DebateState& state, Stance side, Stage stage, const std::vector<Battlefield>& fields,
                           int budget) const;
  std::int64_t request_seed(int turn, int phase) const;

  StagePipelineConfig config_;
  Collaborators c_;
};

}  // namespace debate::orchestrator
