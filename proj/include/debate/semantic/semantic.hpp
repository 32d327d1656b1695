#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "debate/core/flow_tree.hpp"
#include "debate/core/rehearsal_tree.hpp"
#include "debate/provider/embed.hpp"

namespace debate::semantic {

inline constexpr double kDefaultThreshold = 0.8;

/// Throws PreconditionError unless theta is in (0, 1].
void validate_threshold(double theta);

/// Standard cosine. Throws PreconditionError on dimension or model mismatch
/// and on an all-zero vector.
double cosine_similarity(const provider::EmbeddingVector& a, const provider::EmbeddingVector& b);

/// Similarity between two claim texts.
class ClaimMatcher {
 public:
  virtual ~ClaimMatcher() = default;
  virtual double similarity(std::string_view a, std::string_view b) = 0;
};

/// Cosine of the two texts' embeddings.
class EmbeddingMatcher : public ClaimMatcher {
 public:
  explicit EmbeddingMatcher(provider::Embedder& embedder) : embedder_(embedder) {}
  double similarity(std::string_view a, std::string_view b) override;

 private:
  provider::Embedder& embedder_;
};

/// 1 for identical text, 0 otherwise.
class ExactMatcher : public ClaimMatcher {
 public:
  double similarity(std::string_view a, std::string_view b) override { return a == b ? 1.0 : 0.0; }
};

struct FlowMatch {
  int node_id = 0;
  double similarity = 0.0;
};

using FlowFilter = std::function<bool(const FlowNode&)>;

/// Highest-similarity node (root anchor excluded) passing `filter` with
/// similarity >= theta. Ties keep the earliest node in pre-order.
std::optional<FlowMatch> find_similar_node(const DebateFlowTree& tree, std::string_view target, double theta,
                                           ClaimMatcher& matcher, const FlowFilter& filter = {});

struct RehearsalMatch {
  const RehearsalNode* node = nullptr;
  double similarity = 0.0;
};

using RehearsalFilter = std::function<bool(const RehearsalNode&)>;

std::optional<RehearsalMatch> find_similar_node(const RehearsalTree& tree, std::string_view target, double theta,
                                                ClaimMatcher& matcher, const RehearsalFilter& filter = {});

/// One line per node including the root anchor, pre-order:
///   <2*depth spaces>[side][status][visits] claim
/// Newlines and backslashes in claims are escaped as \n and \\.
std::string flow_tree_to_string(const DebateFlowTree& tree);

/// Both trees of a debate, Pro first; the corpus retrieval key.
std::string debate_to_string(const DebateFlowTree& pro, const DebateFlowTree& con);

struct TreeLine {
  int depth = 0;
  Stance side = Stance::Pro;
  NodeStatus status = NodeStatus::Proposed;
  int visits = 0;
  std::string claim;

  bool operator==(const TreeLine&) const = default;
};

/// The lines flow_tree_to_string would print, as data.
std::vector<TreeLine> tree_lines(const DebateFlowTree& tree);
/// Inverse of flow_tree_to_string. Throws ParseError on malformed lines.
std::vector<TreeLine> parse_tree_string(std::string_view text);

}  // namespace debate::semantic
