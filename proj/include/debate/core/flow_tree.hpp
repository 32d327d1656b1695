#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/types.hpp"

namespace debate {

enum class NodeStatus { Proposed, Attacked, Solved };

std::string_view to_string(NodeStatus s);
NodeStatus parse_node_status(std::string_view s);

/// When a node entered the debate: the stage and its index in the schedule.
struct TurnStamp {
  Stage stage = Stage::Opening;
  int turn = 0;

  bool operator==(const TurnStamp&) const = default;
};

struct FlowNode {
  int id = 0;
  Claim claim;
  std::vector<std::string> arguments;
  Stance side = Stance::Pro;
  NodeStatus status = NodeStatus::Proposed;
  int visits = 0;
  std::optional<TurnStamp> created_at;
  std::vector<FlowNode> children;

  bool operator==(const FlowNode&) const = default;
};

/// Live record of one side's claims with the attacks and defenses under them.
/// The root is a synthetic anchor; its direct children are the owner's main
/// claims. Node ids are unique within a tree and assigned in creation order.
class DebateFlowTree {
 public:
  static constexpr int kRootId = 0;
  static constexpr const char* kRootText = "ROOT";

  explicit DebateFlowTree(Stance owner = Stance::Pro);

  Stance owner() const { return owner_; }
  const FlowNode& root() const { return root_; }

  /// Number of nodes excluding the root anchor.
  std::size_t size() const;
  bool empty() const { return root_.children.empty(); }

  const FlowNode* find(int id) const;
  FlowNode* find(int id);
  /// Parent of `id`, nullptr for the root or unknown ids.
  const FlowNode* parent_of(int id) const;
  /// Depth below the root (root = 0, main claims = 1).
  int depth_of(int id) const;

  /// Pre-order traversal excluding the root anchor.
  void for_each(const std::function<void(const FlowNode&, int depth)>& fn) const;
  std::vector<const FlowNode*> nodes() const;

  /// Appends a child and returns its id.
  int add_child(int parent_id, Claim claim, std::vector<std::string> arguments, Stance side,
                std::optional<TurnStamp> stamp);

  /// The one transition the update algorithm never makes on its own.
  void mark_solved(int id);

  int next_id() const { return next_id_; }

  bool operator==(const DebateFlowTree&) const = default;

  /// Reassembles a tree from parts; used by the parser. No validation here.
  static DebateFlowTree from_parts(Stance owner, FlowNode root, int next_id);

 private:
  Stance owner_;
  FlowNode root_;
  int next_id_ = 1;
};

/// A debater's two trees: its own claims and its opponent's.
struct FlowView {
  DebateFlowTree own;
  DebateFlowTree opponent;

  explicit FlowView(Stance self = Stance::Pro) : own(self), opponent(opposite(self)) {}

  DebateFlowTree& tree_of(Stance owner) { return own.owner() == owner ? own : opponent; }
  const DebateFlowTree& tree_of(Stance owner) const {
    return own.owner() == owner ? own : opponent;
  }

  bool operator==(const FlowView&) const = default;
};

}  // namespace debate
