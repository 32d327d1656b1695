#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/flow_tree.hpp"
#include "debate/core/rehearsal_tree.hpp"
#include "debate/core/types.hpp"

namespace debate {

struct FlowNodeRef {
  Stance tree_owner = Stance::Pro;
  int node_id = 0;

  bool operator==(const FlowNodeRef&) const = default;
};

/// A rehearsal node pulled in for a candidate action, with its k-step strength.
struct RetrievedArgument {
  TreeOwner forest = TreeOwner::Own;
  int tree_index = 0;
  int node_id = 0;
  int level = 0;
  Stance side = Stance::Pro;
  std::string claim;
  double strength = 0.0;
  double similarity = 0.0;

  bool operator==(const RetrievedArgument&) const = default;
};

struct CandidateAction {
  ActionKind kind = ActionKind::Propose;
  /// Flow-tree node the action responds to; absent for Propose.
  std::optional<FlowNodeRef> target;
  /// Text used for retrieval: the target node's claim, or the claim to propose.
  /// Empty for the bare Propose slot.
  std::string target_claim;
  std::vector<RetrievedArgument> retrieved;
  int k_used = 0;

  /// An action is a hit when retrieval found prepared material.
  bool hit() const { return !retrieved.empty(); }

  bool operator==(const CandidateAction&) const = default;
};

enum class Importance { High, Medium, Low };

std::string_view to_string(Importance i);
Importance parse_importance(std::string_view s);

struct Battlefield {
  std::string description;
  Importance importance = Importance::Low;
  std::string rationale;
  std::vector<CandidateAction> actions;

  bool operator==(const Battlefield&) const = default;
};

/// What a side prepared before speaking: anticipation trees, the chosen main
/// claims and the cached topic definition.
struct SidePreparation {
  RehearsalForest forest;
  bool forest_ready = false;
  std::vector<Claim> main_claims;
  std::string framework;
  std::string explanation;
  bool claims_selected = false;
  std::string definition;

  bool operator==(const SidePreparation&) const = default;
};

struct DebateState {
  Motion motion;
  std::map<Stance, std::string> debaters;
  std::vector<ScheduleSlot> schedule;
  FlowView pro_view{Stance::Pro};
  FlowView con_view{Stance::Con};
  std::vector<Statement> transcript;
  std::uint64_t rng_seed = 0;
  SidePreparation pro_prep;
  SidePreparation con_prep;

  FlowView& view(Stance s) { return s == Stance::Pro ? pro_view : con_view; }
  const FlowView& view(Stance s) const { return s == Stance::Pro ? pro_view : con_view; }
  SidePreparation& prep(Stance s) { return s == Stance::Pro ? pro_prep : con_prep; }
  const SidePreparation& prep(Stance s) const { return s == Stance::Pro ? pro_prep : con_prep; }

  /// Next slot to be spoken, or nullopt once the schedule is exhausted.
  std::optional<ScheduleSlot> next_slot() const;
  bool complete() const { return transcript.size() >= schedule.size(); }

  bool operator==(const DebateState&) const = default;
};

DebateState new_debate_state(Motion motion, std::uint64_t seed,
                             std::string pro_debater = "engine", std::string con_debater = "engine");

}  // namespace debate
