#include "debate/flow/flow.hpp"

#include "json.hpp"

#include "debate/prompts/prompts.hpp"
#include "debate/util/text.hpp"

namespace debate::flow {

using Json = nlohmann::json;

namespace {

std::string claims_of_side(const FlowView& view, Stance side) {
  std::string out;
  for (const auto* tree : {&view.own, &view.opponent}) {
    tree->for_each([&](const FlowNode& n, int) {
      if (n.side == side) out += "- " + n.claim.text + "\n";
    });
  }
  return out.empty() ? "(none yet)\n" : out;
}

}  // namespace

std::string ChatActionExtractor::render_prompt(const Statement& statement, const FlowView& view) {
  return prompts::render_named("extract_actions", {{"side", std::string(to_string(statement.side))},
                                                   {"stage", std::string(to_string(statement.stage))},
                                                   {"own_claims", claims_of_side(view, statement.side)},
                                                   {"opponent_claims", claims_of_side(view, opposite(statement.side))},
                                                   {"statement", prompts::fenced(statement.text)}});
}

std::vector<ActionTuple> ChatActionExtractor::parse_reply(const std::string& reply) {
  std::vector<ActionTuple> out;
  try {
    const auto j = Json::parse(prompts::extract_json_object(reply));
    for (const auto& t : j.at("tuples")) {
      ActionTuple tuple;
      tuple.kind = parse_action_kind(t.at("action").get<std::string>());
      tuple.claim.text = std::string(text::trim(t.at("claim").get<std::string>()));
      tuple.argument = t.value("argument", "");
      if (t.contains("target") && !t["target"].is_null()) {
        const auto target = std::string(text::trim(t["target"].get<std::string>()));
        if (!target.empty()) tuple.target = Claim(target);
      }
      if (tuple.claim.text.empty()) throw ParseError("extracted tuple has an empty claim");
      if (!satisfies_target_rule(tuple)) {
        throw ParseError("extracted " + std::string(to_string(tuple.kind)) + " tuple violates the target rule");
      }
      out.push_back(std::move(tuple));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("extractor reply: ") + e.what());
  }
  return out;
}

std::vector<ActionTuple> ChatActionExtractor::extract(const Statement& statement, const FlowView& view) {
  const auto prompt = render_prompt(statement, view);
  for (int attempt = 0;; ++attempt) {
    provider::ChatRequest req;
    req.prompt = prompt;
    req.seed = seed_ + attempt;
    req.origin = "flow/extract";
    try {
      return parse_reply(chat_.chat(req));
    } catch (const ParseError& e) {
      if (attempt >= 1) throw ParseError(std::string("action extraction failed after retry: ") + e.what());
    }
  }
}

void ScriptedActionExtractor::script(const std::string& statement_text, std::vector<ActionTuple> tuples) {
  std::lock_guard lock(mu_);
  by_text_[statement_text] = std::move(tuples);
}

void ScriptedActionExtractor::script_next(std::vector<ActionTuple> tuples) {
  std::lock_guard lock(mu_);
  next_.push_back(std::move(tuples));
}

std::vector<ActionTuple> ScriptedActionExtractor::extract(const Statement& statement, const FlowView&) {
  std::lock_guard lock(mu_);
  if (const auto it = by_text_.find(statement.text); it != by_text_.end()) return it->second;
  if (next_.empty()) throw ParseError("scripted extractor has nothing for this statement");
  auto t = std::move(next_.front());
  next_.pop_front();
  return t;
}

std::vector<ActionTuple> extract_action_tuples(const Statement& statement, const FlowView& view,
                                               ActionExtractor& extractor) {
  if (text::trim(statement.text).empty()) throw PreconditionError("cannot extract actions from an empty statement");
  auto tuples = extractor.extract(statement, view);
  for (const auto& t : tuples) {
    if (!satisfies_target_rule(t)) {
      throw ParseError("extracted " + std::string(to_string(t.kind)) + " tuple violates the target rule");
    }
  }
  return tuples;
}

namespace {

semantic::FlowFilter target_filter(ActionKind kind, Stance speaker) {
  if (kind == ActionKind::Reinforce) return [speaker](const FlowNode& n) { return n.side == speaker; };
  return [speaker](const FlowNode& n) { return n.side != speaker; };
}

// Applies a targeted tuple at an already matched node.
int apply_at(DebateFlowTree& tree, const ActionTuple& tuple, int matched, std::optional<TurnStamp> stamp) {
  FlowNode* node = tree.find(matched);
  if (!node) throw DebateError("matched node vanished");
  node->visits += 1;
  if (tuple.kind == ActionKind::Reinforce) {
    if (!tuple.argument.empty()) node->arguments.push_back(tuple.argument);
    return matched;
  }
  const Stance child_side = opposite(node->side);
  node->status = NodeStatus::Attacked;
  std::vector<std::string> args;
  if (!tuple.argument.empty()) args.push_back(tuple.argument);
  return tree.add_child(matched, tuple.claim, std::move(args), child_side, stamp);
}

int propose(DebateFlowTree& tree, const ActionTuple& tuple, std::optional<TurnStamp> stamp) {
  std::vector<std::string> args;
  if (!tuple.argument.empty()) args.push_back(tuple.argument);
  return tree.add_child(DebateFlowTree::kRootId, tuple.claim, std::move(args), tree.owner(), stamp);
}

}  // namespace

UpdateResult update_flow_tree(DebateFlowTree& tree, const ActionTuple& tuple, Stance speaker, double theta,
                              semantic::ClaimMatcher& matcher, std::optional<TurnStamp> stamp) {
  if (!satisfies_target_rule(tuple)) throw PreconditionError("tuple violates the target rule");
  if (tuple.kind == ActionKind::Propose) {
    if (speaker != tree.owner()) throw PreconditionError("only the tree owner proposes into it");
    return {propose(tree, tuple, stamp), std::nullopt, 0.0};
  }
  const auto match = semantic::find_similar_node(tree, tuple.target->text, theta, matcher,
                                                 target_filter(tuple.kind, speaker));
  if (!match) throw MatchNotFound(tuple);
  return {apply_at(tree, tuple, match->node_id, stamp), match->node_id, match->similarity};
}

std::string_view to_string(ApplyOutcome o) {
  switch (o) {
    case ApplyOutcome::Created: return "created";
    case ApplyOutcome::Matched: return "matched";
    case ApplyOutcome::Missed: return "missed";
  }
  return "created";
}

std::vector<ApplyRecord> apply_statement(FlowView& view, const std::vector<ActionTuple>& tuples, Stance speaker,
                                         double theta, semantic::ClaimMatcher& matcher,
                                         std::optional<TurnStamp> stamp) {
  std::vector<ApplyRecord> records;
  for (const auto& tuple : tuples) {
    if (!satisfies_target_rule(tuple)) throw PreconditionError("tuple violates the target rule");
    ApplyRecord rec;
    rec.tuple = tuple;
    if (tuple.kind == ActionKind::Propose) {
      auto& tree = view.tree_of(speaker);
      rec.tree_owner = speaker;
      rec.node_id = propose(tree, tuple, stamp);
      rec.outcome = ApplyOutcome::Created;
      records.push_back(std::move(rec));
      continue;
    }
    const auto filter = target_filter(tuple.kind, speaker);
    std::optional<semantic::FlowMatch> best;
    Stance best_owner = speaker;
    for (const Stance owner : {speaker, opposite(speaker)}) {
      const auto m = semantic::find_similar_node(view.tree_of(owner), tuple.target->text, theta, matcher, filter);
      if (m && (!best || m->similarity > best->similarity)) {
        best = m;
        best_owner = owner;
      }
    }
    if (!best) {
      auto& tree = view.tree_of(speaker);
      rec.tree_owner = speaker;
      rec.node_id = propose(tree, tuple, stamp);
      rec.outcome = ApplyOutcome::Missed;
    } else {
      rec.tree_owner = best_owner;
      rec.matched_id = best->node_id;
      rec.similarity = best->similarity;
      rec.node_id = apply_at(view.tree_of(best_owner), tuple, best->node_id, stamp);
      rec.outcome = tuple.kind == ActionKind::Reinforce ? ApplyOutcome::Matched : ApplyOutcome::Created;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CandidateAction> candidate_actions(const DebateFlowTree& own, const DebateFlowTree& oppo, Stage stage,
                                               const CandidateOptions& options) {
  const Stance self = own.owner();
  std::vector<CandidateAction> proposes, reinforces, attacks, rebuts, recent_rebuts;
  if (stage == Stage::Opening) proposes.push_back(CandidateAction{ActionKind::Propose, std::nullopt, "", {}, 0});
  for (const auto* tree : {&own, &oppo}) {
    tree->for_each([&](const FlowNode& n, int) {
      const FlowNodeRef ref{tree->owner(), n.id};
      if (n.side == self) {
        reinforces.push_back({ActionKind::Reinforce, ref, n.claim.text, {}, 0});
        return;
      }
      attacks.push_back({ActionKind::Attack, ref, n.claim.text, {}, 0});
      if (n.children.empty()) {
        rebuts.push_back({ActionKind::Rebut, ref, n.claim.text, {}, 0});
        if (options.rebut_turn && n.created_at && n.created_at->turn == *options.rebut_turn) {
          recent_rebuts.push_back(rebuts.back());
        }
      }
    });
  }
  if (options.rebut_turn && !recent_rebuts.empty()) rebuts = std::move(recent_rebuts);

  std::vector<CandidateAction> out;
  for (auto* group : {&proposes, &reinforces, &attacks, &rebuts}) {
    for (auto& a : *group) out.push_back(std::move(a));
  }
  return out;
}

int remaining_rounds_k(Stage stage, Stance side) {
  switch (stage) {
    case Stage::Opening: return side == Stance::Pro ? 3 : 2;
    case Stage::Rebuttal: return side == Stance::Pro ? 1 : 0;
    case Stage::Closing: return 0;
  }
  return 0;
}

namespace {

struct ForestMatch {
  TreeOwner forest = TreeOwner::Own;
  int tree_index = 0;
  const RehearsalNode* node = nullptr;
  double similarity = 0.0;
};

std::optional<ForestMatch> best_in_forest(const RehearsalForest& forest, const std::string& target, double theta,
                                          semantic::ClaimMatcher& matcher, const semantic::RehearsalFilter& filter) {
  std::optional<ForestMatch> best;
  const std::pair<TreeOwner, const std::vector<RehearsalTree>*> parts[] = {{TreeOwner::Own, &forest.own},
                                                                          {TreeOwner::Opponent, &forest.opponent}};
  for (const auto& [owner, trees] : parts) {
    for (std::size_t i = 0; i < trees->size(); ++i) {
      const auto m = semantic::find_similar_node((*trees)[i], target, theta, matcher, filter);
      if (m && (!best || m->similarity > best->similarity)) {
        best = ForestMatch{owner, static_cast<int>(i), m->node, m->similarity};
      }
    }
  }
  return best;
}

RetrievedArgument retrieved(const ForestMatch& m, const RehearsalNode& node, int k) {
  return {m.forest, m.tree_index, node.id, node.level, node.side, node.claim_text(), stored_strength(node, k),
          m.similarity};
}

}  // namespace

std::vector<CandidateAction> retrieve_prepared(const std::vector<CandidateAction>& actions, Stance speaker,
                                               const RehearsalForest& forest, int k, double theta,
                                               semantic::ClaimMatcher& matcher) {
  if (k < 0) throw PreconditionError("lookahead k must be >= 0");
  semantic::validate_threshold(theta);
  std::vector<CandidateAction> out;
  for (auto action : actions) {
    action.k_used = k;
    action.retrieved.clear();
    if (!action.target_claim.empty()) {
      const bool same_side = action.kind == ActionKind::Propose || action.kind == ActionKind::Reinforce;
      const auto filter = [speaker, same_side](const RehearsalNode& n) { return (n.side == speaker) == same_side; };
      if (const auto m = best_in_forest(forest, action.target_claim, theta, matcher, filter)) {
        if (same_side) {
          action.retrieved.push_back(retrieved(*m, *m->node, k));
        } else {
          for (const auto& child : m->node->children) action.retrieved.push_back(retrieved(*m, child, k));
        }
      }
    }
    out.push_back(std::move(action));
  }
  return out;
}

}  // namespace debate::flow
