#include "debate/orchestrator/orchestrator.hpp"

#include <cmath>

#include "debate/core/serialize.hpp"
#include "debate/core/validate.hpp"
#include "debate/orchestrator/battlefield.hpp"
#include "debate/prompts/prompts.hpp"
#include "debate/util/text.hpp"

namespace debate::orchestrator {

using Json = nlohmann::json;

namespace {

const char* stage_key(Stage s) {
  switch (s) {
    case Stage::Opening: return "opening";
    case Stage::Rebuttal: return "rebuttal";
    case Stage::Closing: return "closing";
  }
  return "opening";
}

Json feedback_to_json(const audience::AudienceFeedback& f) {
  Json issues = Json::array();
  for (const auto& i : f.issues) issues.push_back({{"issue", i.issue}, {"impact", i.impact}, {"suggestion", i.suggestion}});
  return {{"clarity", f.clarity},
          {"engagement", f.engagement},
          {"evidence", f.evidence},
          {"persuasion", f.persuasion},
          {"issues", issues}};
}

audience::AudienceFeedback feedback_from_json(const Json& j) {
  audience::AudienceFeedback f;
  f.clarity = doc::require(j, "clarity").get<std::string>();
  f.engagement = doc::require(j, "engagement").get<std::string>();
  f.evidence = doc::require(j, "evidence").get<std::string>();
  f.persuasion = doc::require(j, "persuasion").get<std::string>();
  for (const auto& i : doc::require(j, "issues")) {
    f.issues.push_back({doc::require(i, "issue").get<std::string>(), doc::require(i, "impact").get<std::string>(),
                        doc::require(i, "suggestion").get<std::string>()});
  }
  return f;
}

Json trace_to_json(const timing::FitTrace& t) {
  Json its = Json::array();
  for (const auto& i : t.iterations) {
    its.push_back({{"budget", i.budget},
                   {"duration_s", i.duration_s},
                   {"statement_hash", i.statement_hash},
                   {"interval_lo", i.interval_lo},
                   {"interval_hi", i.interval_hi}});
  }
  return {{"initial_duration_s", t.initial_duration_s},
          {"iterations", its},
          {"outcome", std::string(timing::to_string(t.outcome))}};
}

timing::FitTrace trace_from_json(const Json& j) {
  timing::FitTrace t;
  t.initial_duration_s = doc::require(j, "initial_duration_s").get<double>();
  t.outcome = timing::parse_fit_outcome(doc::require(j, "outcome").get<std::string>());
  for (const auto& i : doc::require(j, "iterations")) {
    t.iterations.push_back({doc::require(i, "budget").get<int>(), doc::require(i, "duration_s").get<double>(),
                            doc::require(i, "statement_hash").get<std::string>(),
                            doc::require(i, "interval_lo").get<int>(), doc::require(i, "interval_hi").get<int>()});
  }
  return t;
}

std::string claims_block(const std::vector<Claim>& claims) {
  std::string out;
  for (const auto& c : claims) out += "- " + c.text + "\n";
  return out.empty() ? "(none selected)" : out;
}

}  // namespace

void StagePipelineConfig::validate() const {
  if (!(words_per_minute > 0)) throw PreconditionError("words_per_minute must be positive");
  for (const Stage s : {Stage::Opening, Stage::Rebuttal, Stage::Closing}) {
    const auto it = time_limits.find(s);
    if (it == time_limits.end() || !(it->second > 0)) {
      throw PreconditionError(std::string("time limit for ") + stage_key(s) + " must be positive");
    }
    const auto tt = templates.find(s);
    if (tt == templates.end()) throw PreconditionError(std::string("no template for ") + stage_key(s));
    prompts::get(tt->second);
  }
  if (!(lower_fraction > 0 && lower_fraction < 1)) throw PreconditionError("lower_fraction must be in (0, 1)");
  if (revision_cycles < 0) throw PreconditionError("revision_cycles must be >= 0");
  semantic::validate_threshold(theta);
  semantic::validate_threshold(retrieval_theta);
  rehearsal.validate();
  if (main_claims < 1) throw PreconditionError("main_claims must be >= 1");
  if (max_iter < 1) throw PreconditionError("max_iter must be >= 1");
}

int StagePipelineConfig::word_budget(Stage s) const {
  return static_cast<int>(std::lround(words_per_minute * limit(s) / 60.0));
}

Json StagePipelineConfig::to_json() const {
  Json limits, tmpl;
  for (const auto& [s, v] : time_limits) limits[stage_key(s)] = v;
  for (const auto& [s, v] : templates) tmpl[stage_key(s)] = v;
  return {{"words_per_minute", words_per_minute},
          {"time_limits", limits},
          {"lower_fraction", lower_fraction},
          {"revision_cycles", revision_cycles},
          {"templates", tmpl},
          {"theta", theta},
          {"retrieval_theta", retrieval_theta},
          {"max_branch", rehearsal.max_branch},
          {"max_depth", rehearsal.max_depth},
          {"decay", rehearsal.decay},
          {"main_claims", main_claims},
          {"max_iter", max_iter},
          {"rebut_recent_only", rebut_recent_only},
          {"seed", seed}};
}

StagePipelineConfig StagePipelineConfig::from_json(const Json& j) {
  StagePipelineConfig c;
  try {
    c.words_per_minute = j.value("words_per_minute", c.words_per_minute);
    if (j.contains("time_limits")) {
      for (const auto& [k, v] : j.at("time_limits").items()) c.time_limits[parse_stage(k)] = v.get<double>();
    }
    c.lower_fraction = j.value("lower_fraction", c.lower_fraction);
    c.revision_cycles = j.value("revision_cycles", c.revision_cycles);
    if (j.contains("templates")) {
      for (const auto& [k, v] : j.at("templates").items()) c.templates[parse_stage(k)] = v.get<std::string>();
    }
    c.theta = j.value("theta", c.theta);
    c.retrieval_theta = j.value("retrieval_theta", c.retrieval_theta);
    c.rehearsal.max_branch = j.value("max_branch", c.rehearsal.max_branch);
    c.rehearsal.max_depth = j.value("max_depth", c.rehearsal.max_depth);
    c.rehearsal.decay = j.value("decay", c.rehearsal.decay);
    c.main_claims = j.value("main_claims", c.main_claims);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.rebut_recent_only = j.value("rebut_recent_only", c.rebut_recent_only);
    c.seed = j.value("seed", c.seed);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("pipeline config: ") + e.what());
  }
  c.validate();
  return c;
}

Json to_json(const StageRecord& r) {
  Json fields = Json::array();
  for (const auto& b : r.battlefields) fields.push_back(doc::to_json(b));
  Json fb = Json::array();
  for (const auto& f : r.feedback) fb.push_back(feedback_to_json(f));
  Json j{{"turn", r.turn},
         {"side", std::string(to_string(r.side))},
         {"stage", std::string(to_string(r.stage))},
         {"k", r.k},
         {"word_budget", r.word_budget},
         {"battlefields", fields},
         {"draft", doc::to_json(r.draft)},
         {"feedback", fb},
         {"fit", trace_to_json(r.fit)},
         {"hard_cut", r.hard_cut},
         {"statement", doc::to_json(r.statement)},
         {"validity",
          {{"format_valid", r.validity.format_valid},
           {"time_valid", r.validity.time_valid},
           {"reasons", r.validity.reasons}}}};
  if (r.retrieved_corpus_id) j["retrieved_corpus_id"] = *r.retrieved_corpus_id;
  return j;
}

StageRecord stage_record_from_json(const Json& j) {
  try {
    StageRecord r;
    r.turn = doc::require(j, "turn").get<int>();
    r.side = parse_stance(doc::require(j, "side").get<std::string>());
    r.stage = parse_stage(doc::require(j, "stage").get<std::string>());
    r.k = doc::require(j, "k").get<int>();
    r.word_budget = doc::require(j, "word_budget").get<int>();
    for (const auto& b : doc::require(j, "battlefields")) r.battlefields.push_back(doc::battlefield_from_json(b));
    r.draft = doc::statement_from_json(doc::require(j, "draft"));
    for (const auto& f : doc::require(j, "feedback")) r.feedback.push_back(feedback_from_json(f));
    if (j.contains("retrieved_corpus_id")) r.retrieved_corpus_id = j.at("retrieved_corpus_id").get<std::string>();
    r.fit = trace_from_json(doc::require(j, "fit"));
    r.hard_cut = doc::require(j, "hard_cut").get<bool>();
    r.statement = doc::statement_from_json(doc::require(j, "statement"));
    const auto& v = doc::require(j, "validity");
    r.validity.format_valid = doc::require(v, "format_valid").get<bool>();
    r.validity.time_valid = doc::require(v, "time_valid").get<bool>();
    r.validity.reasons = doc::require(v, "reasons").get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("stage record: ") + e.what());
  }
}

std::string ChatReviser::revise(const std::string& statement, int word_budget) {
  provider::ChatRequest req;
  req.prompt = prompts::render_named("revise_length", {{"motion", motion_.text},
                                                       {"act", std::string(act_verb(side_))},
                                                       {"stage", std::string(to_string(stage_))},
                                                       {"n_words", std::to_string(word_budget)},
                                                       {"statement", prompts::fenced(statement)}});
  req.seed = seed_ + calls_++;
  req.origin = "stage/time-fit";
  return prompts::extract_statement(chat_.chat(req));
}

DebateEngine::DebateEngine(StagePipelineConfig config, Collaborators collaborators)
    : config_(std::move(config)), c_(std::move(collaborators)) {
  config_.validate();
}

void DebateEngine::emit(const std::string& phase, Stance side, Stage stage) const {
  if (c_.events) c_.events(phase, side, stage);
}

std::int64_t DebateEngine::request_seed(int turn, int phase) const {
  return config_.seed * 100000 + static_cast<std::int64_t>(turn) * 100 + phase;
}

void DebateEngine::prepare(DebateState& state, Stance side) {
  auto& prep = state.prep(side);
  const Stage stage = state.next_slot() ? state.next_slot()->stage : Stage::Closing;
  if (!prep.forest_ready) {
    emit("prepare", side, stage);
    const auto& params = config_.rehearsal;
    prep.forest = {};
    for (const auto& arg : rehearsal::propose_main_claims(state.motion, side, config_.main_claims, c_.generator)) {
      prep.forest.own.push_back(rehearsal::build_rehearsal_tree(arg, state.motion, side, params, c_.generator,
                                                                c_.scorer, {TreeOwner::Own, {}}));
    }
    const Stance other = opposite(side);
    for (const auto& arg : rehearsal::propose_main_claims(state.motion, other, config_.main_claims, c_.generator)) {
      prep.forest.opponent.push_back(rehearsal::build_rehearsal_tree(arg, state.motion, other, params, c_.generator,
                                                                     c_.scorer, {TreeOwner::Opponent, {}}));
    }
    prep.forest_ready = true;
  }
  if (prep.definition.empty()) {
    emit("definition", side, stage);
    provider::ChatRequest req;
    req.prompt = prompts::render_named("definition", {{"motion", state.motion.text}, {"act", std::string(act_verb(side))}});
    req.seed = request_seed(90, side == Stance::Pro ? 1 : 2);
    req.origin = "prepare/definition";
    prep.definition = std::string(text::trim(c_.chat.chat(req)));
  }
}

void DebateEngine::select_claims(DebateState& state, Stance side) {
  auto& prep = state.prep(side);
  if (prep.claims_selected) return;
  if (!prep.forest_ready) throw PreconditionError("claim selection needs a prepared forest");
  emit("select-claims", side, Stage::Opening);
  std::string context;
  for (const auto& s : state.transcript) {
    if (s.side != side && s.stage == Stage::Opening) context = s.text;
  }
  const auto sel = rehearsal::select_main_claims(prep.forest.own, state.motion, side, prep.definition, context, c_.chat,
                                                 request_seed(91, side == Stance::Pro ? 1 : 2));
  prep.main_claims.clear();
  for (const auto& c : sel.claims) prep.main_claims.emplace_back(c);
  prep.framework = sel.framework;
  prep.explanation = sel.explanation;
  prep.claims_selected = true;
}

std::vector<CandidateAction> DebateEngine::candidates(const DebateState& state, Stance side, Stage stage) const {
  const auto& view = state.view(side);
  const auto& prep = state.prep(side);
  flow::CandidateOptions options;
  if (config_.rebut_recent_only) {
    for (std::size_t i = 0; i < state.transcript.size(); ++i) {
      if (state.transcript[i].side != side) options.rebut_turn = static_cast<int>(i);
    }
  }
  auto raw = flow::candidate_actions(view.own, view.opponent, stage, options);

  // The opening's open Propose slot becomes one Propose per selected claim.
  std::vector<CandidateAction> acts;
  for (auto& a : raw) {
    if (a.kind == ActionKind::Propose && a.target_claim.empty() && !prep.main_claims.empty()) {
      for (const auto& claim : prep.main_claims) acts.push_back({ActionKind::Propose, std::nullopt, claim.text, {}, 0});
    } else {
      acts.push_back(std::move(a));
    }
  }
  if (!prep.forest_ready) return acts;
  return flow::retrieve_prepared(acts, side, prep.forest, flow::remaining_rounds_k(stage, side), config_.theta,
                                 c_.matcher);
}

std::string DebateEngine::draft_prompt(const DebateState& state, Stance side, Stage stage,
                                       const std::vector<Battlefield>& fields, int budget) const {
  const auto& view = state.view(side);
  const auto& prep = state.prep(side);
  prompts::Slots slots{{"motion", state.motion.text},
                       {"act", std::string(act_verb(side))},
                       {"counter_act", std::string(act_verb(opposite(side)))},
                       {"tree", prompts::fenced(semantic::flow_tree_to_string(view.own))},
                       {"oppo_tree", prompts::fenced(semantic::flow_tree_to_string(view.opponent))},
                       {"battlefields", render_battlefields(fields)},
                       {"claims", prompts::fenced(claims_block(prep.main_claims))},
                       {"definition", prompts::fenced(prep.definition)},
                       {"n_words", std::to_string(budget)}};
  return prompts::render_named(config_.templates.at(stage), slots);
}

StageRecord DebateEngine::run_stage(DebateState& state) {
  const auto slot = state.next_slot();
  if (!slot) throw PreconditionError("the debate is already complete");
  const Stance side = slot->side;
  const Stage stage = slot->stage;
  const int turn = static_cast<int>(state.transcript.size());

  prepare(state, side);
  if (stage == Stage::Opening) select_claims(state, side);

  StageRecord rec;
  rec.turn = turn;
  rec.side = side;
  rec.stage = stage;
  rec.k = flow::remaining_rounds_k(stage, side);
  rec.word_budget = config_.word_budget(stage);

  emit("candidates", side, stage);
  const auto acts = candidates(state, side, stage);
  emit("battlefields", side, stage);
  rec.battlefields = assemble_battlefields(acts, state.view(side));

  emit("draft", side, stage);
  provider::ChatRequest req;
  req.prompt = draft_prompt(state, side, stage, rec.battlefields, rec.word_budget);
  req.seed = request_seed(turn, 0);
  req.origin = "stage/draft";
  std::string plan;
  auto draft_text = prompts::extract_statement(c_.chat.chat(req), &plan);
  rec.draft = make_statement(side, stage, draft_text, plan.empty() ? std::nullopt : std::optional<std::string>(plan));

  Statement current = rec.draft;
  for (int cycle = 0; cycle < config_.revision_cycles; ++cycle) {
    emit("audience", side, stage);
    audience::AudienceInput input{state.motion, state.transcript, current, std::nullopt};
    if (c_.embedder && c_.corpus && c_.corpus->size() > 0) {
      const auto& view = state.view(side);
      const auto hit = corpus::retrieve_human_tree(view.tree_of(Stance::Pro), view.tree_of(Stance::Con), *c_.corpus,
                                                   config_.retrieval_theta, *c_.embedder);
      if (hit) {
        input.retrieved_tree = hit->entry->tree_string;
        rec.retrieved_corpus_id = hit->entry->id;
      }
    }
    const auto fb = audience::audience_feedback(input, c_.chat, request_seed(turn, 10 + cycle));
    rec.feedback.push_back(fb);

    emit("revise", side, stage);
    provider::ChatRequest rev;
    rev.prompt = prompts::render_named("revise_feedback", {{"motion", state.motion.text},
                                                           {"act", std::string(act_verb(side))},
                                                           {"stage", std::string(to_string(stage))},
                                                           {"feedback", audience::render_feedback(fb)},
                                                           {"statement", prompts::fenced(current.text)},
                                                           {"n_words", std::to_string(rec.word_budget)}});
    rev.seed = request_seed(turn, 20 + cycle);
    rev.origin = "stage/revise";
    current = make_statement(side, stage, prompts::extract_statement(c_.chat.chat(rev)), rec.draft.plan);
  }

  emit("time-fit", side, stage);
  ChatReviser reviser(c_.chat, state.motion, side, stage, request_seed(turn, 50));
  timing::FitOptions options;
  options.max_iter = config_.max_iter;
  options.words_per_minute = config_.words_per_minute;
  const auto fit = timing::fit_to_time(current, config_.range(stage), reviser, c_.duration, options);
  rec.fit = fit.trace;
  Statement final_statement = make_statement(side, stage, fit.statement.text, rec.draft.plan);

  const double limit = config_.limit(stage);
  if (timing::estimate_duration(final_statement.text, c_.duration) > limit) {
    const auto cut = timing::hard_cut(final_statement, limit, c_.duration);
    final_statement = make_statement(side, stage, cut.statement.text, rec.draft.plan);
    rec.hard_cut = true;
  }
  final_statement.estimated_duration = timing::estimate_duration(final_statement.text, c_.duration);
  rec.statement = final_statement;
  rec.validity = validate_statement(final_statement, limit, c_.duration);
  emit("done", side, stage);
  return rec;
}

std::vector<flow::ApplyRecord> DebateEngine::accept(DebateState& state, Statement statement) {
  const auto slot = state.next_slot();
  if (!slot) throw PreconditionError("the debate is already complete");
  if (statement.side != slot->side || statement.stage != slot->stage) {
    throw PreconditionError("out of turn: expected " + std::string(to_string(slot->side)) + " " +
                            std::string(to_string(slot->stage)));
  }
  if (text::trim(statement.text).empty()) throw PreconditionError("statement text is empty");
  const int turn = static_cast<int>(state.transcript.size());
  const Stance side = statement.side;

  emit("update-trees", side, statement.stage);
  const auto tuples = flow::extract_action_tuples(statement, state.view(side), c_.extractor);
  const TurnStamp stamp{statement.stage, turn};
  auto records = flow::apply_statement(state.view(side), tuples, side, config_.theta, c_.matcher, stamp);
  flow::apply_statement(state.view(opposite(side)), tuples, side, config_.theta, c_.matcher, stamp);
  for (const auto* tree : {&state.pro_view.own, &state.pro_view.opponent, &state.con_view.own, &state.con_view.opponent}) {
    const auto violations = validate_flow_tree(*tree);
    if (!violations.empty()) {
      throw DebateError("flow tree invariant broken after update: " + violations.front().code + " at node " +
                        std::to_string(violations.front().node_id));
    }
  }
  if (!statement.estimated_duration) statement.estimated_duration = timing::estimate_duration(statement.text, c_.duration);
  statement.word_count = text::word_count(statement.text);
  state.transcript.push_back(std::move(statement));
  return records;
}

StageRecord DebateEngine::step(DebateState& state) {
  auto rec = run_stage(state);
  accept(state, rec.statement);
  return rec;
}

}  // namespace debate::orchestrator
