#include "debate/core/flow_tree.hpp"

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

#include <utility>

namespace debate {

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Proposed: return "proposed";
    case NodeStatus::Attacked: return "attacked";
    case NodeStatus::Solved: return "solved";
  }
  return "proposed";
}

NodeStatus parse_node_status(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "proposed") return NodeStatus::Proposed;
  if (v == "attacked") return NodeStatus::Attacked;
  if (v == "solved") return NodeStatus::Solved;
  throw ParseError("unknown node status: " + std::string(s));
}

DebateFlowTree::DebateFlowTree(Stance owner) : owner_(owner) {
  root_.id = kRootId;
  root_.claim = Claim(kRootText);
  root_.side = owner;
}

namespace {

template <typename Node, typename Fn>
bool walk(Node& node, int depth, Fn&& fn) {
  if (fn(node, depth)) return true;
  for (auto& c : node.children) {
    if (walk(c, depth + 1, fn)) return true;
  }
  return false;
}

}  // namespace

std::size_t DebateFlowTree::size() const {
  std::size_t n = 0;
  for_each([&](const FlowNode&, int) { ++n; });
  return n;
}

const FlowNode* DebateFlowTree::find(int id) const {
  const FlowNode* out = nullptr;
  walk(root_, 0, [&](const FlowNode& n, int) {
    if (n.id == id) out = &n;
    return out != nullptr;
  });
  return out;
}

FlowNode* DebateFlowTree::find(int id) {
  return const_cast<FlowNode*>(std::as_const(*this).find(id));
}

const FlowNode* DebateFlowTree::parent_of(int id) const {
  const FlowNode* out = nullptr;
  walk(root_, 0, [&](const FlowNode& n, int) {
    for (const auto& c : n.children) {
      if (c.id == id) out = &n;
    }
    return out != nullptr;
  });
  return out;
}

int DebateFlowTree::depth_of(int id) const {
  int out = -1;
  walk(root_, 0, [&](const FlowNode& n, int depth) {
    if (n.id == id) out = depth;
    return out >= 0;
  });
  return out;
}

void DebateFlowTree::for_each(const std::function<void(const FlowNode&, int)>& fn) const {
  for (const auto& c : root_.children) {
    walk(c, 1, [&](const FlowNode& n, int depth) {
      fn(n, depth);
      return false;
    });
  }
}

std::vector<const FlowNode*> DebateFlowTree::nodes() const {
  std::vector<const FlowNode*> out;
  for_each([&](const FlowNode& n, int) { out.push_back(&n); });
  return out;
}

int DebateFlowTree::add_child(int parent_id, Claim claim, std::vector<std::string> arguments,
                              Stance side, std::optional<TurnStamp> stamp) {
  FlowNode* parent = find(parent_id);
  if (!parent) throw PreconditionError("add_child: unknown parent id " + std::to_string(parent_id));
  FlowNode node;
  node.id = next_id_++;
  node.claim = std::move(claim);
  node.arguments = std::move(arguments);
  node.side = side;
  node.status = NodeStatus::Proposed;
  node.visits = 0;
  node.created_at = stamp;
  parent->children.push_back(std::move(node));
  return parent->children.back().id;
}

void DebateFlowTree::mark_solved(int id) {
  FlowNode* node = find(id);
  if (!node || id == kRootId) throw PreconditionError("mark_solved: unknown node " + std::to_string(id));
  node->status = NodeStatus::Solved;
}

DebateFlowTree DebateFlowTree::from_parts(Stance owner, FlowNode root, int next_id) {
  DebateFlowTree t(owner);
  t.root_ = std::move(root);
  t.next_id_ = next_id;
  return t;
}

}  // namespace debate
