#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "debate/core/rehearsal_tree.hpp"

namespace debate::rehearsal {

/// Indented outline, one node per line:
///   Level-0 Root Claim: "claim": "...", Scores: Support Score: 1.6, Strength: 1.0
///   Level-1 Opponent's Attack: "claim": "...", Scores: Attack Score: 1.3, Strength: 0.8
///     Level-2 Your Rebuttal: ...
/// Scores and the displayed strength f_{L-l} are rounded to one decimal.
std::string render_outline(const RehearsalTree& tree);

struct OutlineLine {
  int level = 0;
  std::string claim;
  std::optional<double> attack_score;
  std::optional<double> support_score;
  double strength = 0.0;
};

/// Inverse of render_outline up to rounding; also accepts hand-written
/// outlines with arbitrary indentation and trailing "\\" line breaks.
std::vector<OutlineLine> parse_outline(std::string_view text);

}  // namespace debate::rehearsal
