#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "debate/core/types.hpp"

namespace debate {

struct RehearsalParams {
  int max_branch = 3;   // B
  int max_depth = 3;    // L
  double decay = 0.8;   // gamma

  /// Throws PreconditionError unless B >= 1, L >= 0 and decay in (0, 1].
  void validate() const;

  bool operator==(const RehearsalParams&) const = default;
};

/// One anticipated argument. Level 0 is the candidate main claim; odd levels
/// belong to the opposing side, even levels to the root's side.
struct RehearsalNode {
  int id = 0;
  Argument argument;
  int level = 0;
  Stance side = Stance::Pro;
  std::optional<double> attack_score;   // against the parent, levels >= 1
  std::optional<double> support_score;  // for the grandparent (levels >= 2) or the stance (level 0)
  std::vector<double> strengths;        // strengths[k] = f_k, k = 0..(L - level)
  std::vector<RehearsalNode> children;

  bool operator==(const RehearsalNode&) const = default;

  const std::string& claim_text() const { return argument.claim.text; }
};

enum class TreeOwner { Own, Opponent };

std::string_view to_string(TreeOwner o);
TreeOwner parse_tree_owner(std::string_view s);

struct RehearsalTree {
  RehearsalNode root;
  Stance stance = Stance::Pro;
  Motion motion;
  TreeOwner owner = TreeOwner::Own;
  RehearsalParams params;

  bool operator==(const RehearsalTree&) const = default;
};

/// Pre-order traversal over every node, root included.
void for_each_node(const RehearsalNode& root,
                   const std::function<void(const RehearsalNode&)>& fn);

/// Looks up f_k from the stored strengths. k beyond the stored range returns
/// the last entry, which is exact: f_k stops changing once k reaches the
/// height of the subtree.
double stored_strength(const RehearsalNode& node, int k);

/// Own and opponent anticipation trees a debater prepared.
struct RehearsalForest {
  std::vector<RehearsalTree> own;
  std::vector<RehearsalTree> opponent;

  bool operator==(const RehearsalForest&) const = default;
};

}  // namespace debate
