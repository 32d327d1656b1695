#include "debate/core/rehearsal_tree.hpp"

#include <algorithm>

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate {

void RehearsalParams::validate() const {
  if (max_branch < 1) throw PreconditionError("rehearsal: max branch must be >= 1");
  if (max_depth < 0) throw PreconditionError("rehearsal: max depth must be >= 0");
  if (!(decay > 0.0 && decay <= 1.0)) throw PreconditionError("rehearsal: decay must lie in (0, 1]");
}

std::string_view to_string(TreeOwner o) { return o == TreeOwner::Own ? "own" : "opponent"; }

TreeOwner parse_tree_owner(std::string_view s) {
  const auto v = text::to_lower_ascii(text::trim(s));
  if (v == "own") return TreeOwner::Own;
  if (v == "opponent") return TreeOwner::Opponent;
  throw ParseError("unknown tree owner: " + std::string(s));
}

void for_each_node(const RehearsalNode& root, const std::function<void(const RehearsalNode&)>& fn) {
  fn(root);
  for (const auto& c : root.children) for_each_node(c, fn);
}

double stored_strength(const RehearsalNode& node, int k) {
  if (k < 0) throw PreconditionError("strength: k must be >= 0");
  if (node.strengths.empty()) throw PreconditionError("strength: node has no stored strengths");
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), node.strengths.size() - 1);
  return node.strengths[idx];
}

}  // namespace debate
