#include "debate/core/validate.hpp"

#include <set>

namespace debate {

namespace {

void check_flow_node(const FlowNode& node, bool is_root, Stance owner, std::set<int>& ids,
                     std::vector<Violation>& out) {
  if (!ids.insert(node.id).second) {
    out.push_back({"duplicate id", node.id, "node id appears more than once"});
  }
  if (!is_root) {
    if (node.visits < 0) out.push_back({"negative visits", node.id, "visit count below zero"});
    if (node.status == NodeStatus::Attacked && node.children.empty()) {
      out.push_back({"status/children mismatch", node.id, "attacked node has no children"});
    }
    if (node.status == NodeStatus::Proposed && !node.children.empty()) {
      out.push_back({"status/children mismatch", node.id, "proposed node has children"});
    }
  }
  for (const auto& c : node.children) {
    if (is_root) {
      if (c.side != owner) out.push_back({"root child side", c.id, "main claim not on the owner's side"});
    } else if (c.side == node.side) {
      out.push_back({"side alternation", c.id, "child shares its parent's side"});
    }
    check_flow_node(c, false, owner, ids, out);
  }
}

void check_rehearsal_node(const RehearsalNode& node, const RehearsalParams& params,
                          std::set<int>& ids, std::vector<Violation>& out) {
  if (!ids.insert(node.id).second) out.push_back({"duplicate id", node.id, "node id appears more than once"});
  const bool has_a = node.attack_score.has_value();
  const bool has_s = node.support_score.has_value();
  const bool scores_ok = node.level == 0 ? (!has_a && has_s) : node.level == 1 ? (has_a && !has_s) : (has_a && has_s);
  if (!scores_ok) out.push_back({"level scores", node.id, "scores do not match the node's level"});
  for (const auto score : {node.attack_score, node.support_score}) {
    if (score && (*score < 0.0 || *score > 2.0)) out.push_back({"score range", node.id, "score outside [0, 2]"});
  }
  if (node.level > params.max_depth) out.push_back({"depth bound", node.id, "node deeper than L"});
  if (static_cast<int>(node.children.size()) > params.max_branch) {
    out.push_back({"branch bound", node.id, "more than B children"});
  }
  const auto expected = static_cast<std::size_t>(params.max_depth - node.level + 1);
  if (node.level <= params.max_depth && node.strengths.size() != expected) {
    out.push_back({"strengths", node.id, "expected f_0..f_(L-l)"});
  }
  for (const auto& c : node.children) {
    if (c.level != node.level + 1) out.push_back({"level order", c.id, "child level is not parent level + 1"});
    if (c.side == node.side) out.push_back({"side alternation", c.id, "child shares its parent's side"});
    check_rehearsal_node(c, params, ids, out);
  }
}

}  // namespace

std::vector<Violation> validate_flow_tree(const DebateFlowTree& tree) {
  std::vector<Violation> out;
  std::set<int> ids;
  check_flow_node(tree.root(), true, tree.owner(), ids, out);
  if (!ids.empty() && *ids.rbegin() >= tree.next_id()) {
    out.push_back({"id counter", *ids.rbegin(), "next_id not above every node id"});
  }
  return out;
}

std::vector<Violation> validate_rehearsal_tree(const RehearsalTree& tree) {
  std::vector<Violation> out;
  std::set<int> ids;
  if (tree.root.level != 0) out.push_back({"level order", tree.root.id, "root must be level 0"});
  if (tree.root.side != tree.stance) out.push_back({"root side", tree.root.id, "root not on the tree's stance"});
  check_rehearsal_node(tree.root, tree.params, ids, out);
  return out;
}

}  // namespace debate
