#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/errors.hpp"
#include "debate/core/flow_tree.hpp"
#include "debate/core/state.hpp"
#include "debate/provider/chat.hpp"
#include "debate/semantic/semantic.hpp"

namespace debate::flow {

/// Breaks a statement into (action, claim, argument, target) tuples.
class ActionExtractor {
 public:
  virtual ~ActionExtractor() = default;
  /// `view` is the speaker's view before the statement is applied.
  virtual std::vector<ActionTuple> extract(const Statement& statement, const FlowView& view) = 0;
};

class ChatActionExtractor : public ActionExtractor {
 public:
  ChatActionExtractor(provider::ChatProvider& chat, std::int64_t seed = 0) : chat_(chat), seed_(seed) {}

  /// Unparseable replies are retried once with a shifted seed.
  std::vector<ActionTuple> extract(const Statement& statement, const FlowView& view) override;

  static std::string render_prompt(const Statement& statement, const FlowView& view);
  /// {"tuples":[{"action":..,"claim":..,"argument":..,"target":..}]}. Unknown
  /// actions and target-rule violations are ParseErrors.
  static std::vector<ActionTuple> parse_reply(const std::string& reply);

 private:
  provider::ChatProvider& chat_;
  std::int64_t seed_;
};

/// Test double keyed by exact statement text, with a FIFO fallback.
class ScriptedActionExtractor : public ActionExtractor {
 public:
  void script(const std::string& statement_text, std::vector<ActionTuple> tuples);
  void script_next(std::vector<ActionTuple> tuples);

  std::vector<ActionTuple> extract(const Statement& statement, const FlowView& view) override;

 private:
  std::mutex mu_;
  std::map<std::string, std::vector<ActionTuple>> by_text_;
  std::deque<std::vector<ActionTuple>> next_;
};

/// Empty statement text is a PreconditionError; every returned tuple
/// satisfies the target rule.
std::vector<ActionTuple> extract_action_tuples(const Statement& statement, const FlowView& view,
                                               ActionExtractor& extractor);

/// No node reached the similarity threshold for a targeted tuple.
class MatchNotFound : public DebateError {
 public:
  explicit MatchNotFound(const ActionTuple& tuple)
      : DebateError("no flow node matches target '" + (tuple.target ? tuple.target->text : std::string()) + "'"),
        tuple_(tuple) {}
  const ActionTuple& tuple() const { return tuple_; }

 private:
  ActionTuple tuple_;
};

struct UpdateResult {
  /// Node created (Propose, Attack, Rebut) or reinforced.
  int node_id = 0;
  /// Node the tuple matched; absent for Propose.
  std::optional<int> matched_id;
  double similarity = 0.0;
};

/// Applies one tuple spoken by `speaker` to a single tree:
///   Propose   -> new Proposed child of the root (speaker must own the tree)
///   Reinforce -> best speaker-side match gains the argument, visits + 1
///   Attack/Rebut -> best opposing-side match gains a Proposed child and
///                   becomes Attacked, visits + 1
/// Throws MatchNotFound when nothing reaches theta.
UpdateResult update_flow_tree(DebateFlowTree& tree, const ActionTuple& tuple, Stance speaker, double theta,
                              semantic::ClaimMatcher& matcher, std::optional<TurnStamp> stamp = std::nullopt);

enum class ApplyOutcome { Created, Matched, Missed };

std::string_view to_string(ApplyOutcome o);

struct ApplyRecord {
  ActionTuple tuple;
  ApplyOutcome outcome = ApplyOutcome::Created;
  Stance tree_owner = Stance::Pro;
  int node_id = 0;
  std::optional<int> matched_id;
  double similarity = 0.0;
};

/// Applies a statement's tuples to both trees of a view. Targets are matched
/// across both trees (speaker's tree first on ties). A targeted tuple with no
/// match is placed as a new Proposed main claim in the speaker's tree and
/// reported as Missed.
std::vector<ApplyRecord> apply_statement(FlowView& view, const std::vector<ActionTuple>& tuples, Stance speaker,
                                         double theta, semantic::ClaimMatcher& matcher,
                                         std::optional<TurnStamp> stamp = std::nullopt);

struct CandidateOptions {
  /// When set, Rebut targets are limited to opposing leaves created on this
  /// turn, falling back to all opposing leaves if that leaves none.
  std::optional<int> rebut_turn;
};

/// Legal moves for the owner of `own`: one open Propose slot at the opening
/// only; Reinforce on every speaker-side node, Attack on every opposing node,
/// Rebut on every opposing leaf, across both trees. Grouped by kind, each in
/// own-tree then opponent-tree pre-order.
std::vector<CandidateAction> candidate_actions(const DebateFlowTree& own, const DebateFlowTree& oppo, Stage stage,
                                               const CandidateOptions& options = {});

/// Remaining effective rounds after this speech: Pro opening 3, Con opening
/// 2, Pro rebuttal 1, Con rebuttal 0, closings 0.
int remaining_rounds_k(Stage stage, Stance side);

/// Attaches prepared material from the speaker's forest. Propose and
/// Reinforce take the best speaker-side match itself; Attack and Rebut take
/// every child of the best opposing-side match. Each entry carries f_k.
std::vector<CandidateAction> retrieve_prepared(const std::vector<CandidateAction>& actions, Stance speaker,
                                               const RehearsalForest& forest, int k, double theta,
                                               semantic::ClaimMatcher& matcher);

}  // namespace debate::flow
