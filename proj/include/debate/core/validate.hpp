#pragma once

#include <string>
#include <vector>

#include "debate/core/flow_tree.hpp"
#include "debate/core/rehearsal_tree.hpp"

namespace debate {

struct Violation {
  std::string code;  // e.g. "side alternation", "status/children mismatch"
  int node_id = 0;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Structural checks on a flow tree. Empty result means every invariant holds.
std::vector<Violation> validate_flow_tree(const DebateFlowTree& tree);

/// Level/score/branch/depth rules of a built rehearsal tree.
std::vector<Violation> validate_rehearsal_tree(const RehearsalTree& tree);

}  // namespace debate
