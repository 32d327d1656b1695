#pragma once

#include <string>
#include <vector>

#include "debate/core/flow_tree.hpp"
#include "debate/core/state.hpp"

namespace debate::orchestrator {

/// Groups candidate actions by the top-level flow subtree they touch (each
/// Propose is its own group), ranks groups by (best retrieved f_k, subtree
/// visits) descending with first appearance breaking ties, and labels rank
/// terciles high / medium / low.
std::vector<Battlefield> assemble_battlefields(const std::vector<CandidateAction>& actions, const FlowView& view);

/// Text block for the stage prompts' battlefield slot. One header block per
/// battlefield, then one line per action:
///   - attack | target: "T" | prepared: "C1" (f2=0.80); "C2" (f2=0.62)
///   - propose | claim: "X" | prepared: none
///   - propose | open slot for a new main claim
/// Double quotes inside claims are written as single quotes.
std::string render_battlefields(const std::vector<Battlefield>& battlefields);

}  // namespace debate::orchestrator
