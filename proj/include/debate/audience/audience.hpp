#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/types.hpp"
#include "debate/provider/chat.hpp"

namespace debate::audience {

struct FeedbackIssue {
  std::string issue;
  std::string impact;
  std::string suggestion;

  bool operator==(const FeedbackIssue&) const = default;
};

struct AudienceFeedback {
  std::string clarity;
  std::string engagement;
  std::string evidence;
  std::string persuasion;
  std::vector<FeedbackIssue> issues;

  bool operator==(const AudienceFeedback&) const = default;
};

struct AudienceInput {
  Motion motion;
  std::vector<Statement> history;
  Statement statement;
  /// Tree string of the retrieved human debate; nullopt on a retrieval miss.
  std::optional<std::string> retrieved_tree;
};

/// Fills the audience template. Without a retrieved tree the retrieval
/// section is dropped entirely.
std::string assemble_prompt(const AudienceInput& input);

/// Heading-anchored parse. Accepts the template's bracketed output format and
/// the markdown variant (## headings, **bold** labels, numbered issues).
/// Throws ParseError when a dimension is missing or empty, or an issue lacks
/// one of its three parts.
AudienceFeedback parse_feedback(const std::string& reply);

/// Renders feedback back into the markdown variant (for revision prompts).
std::string render_feedback(const AudienceFeedback& feedback);

/// One provider call, retried once with a shifted seed if the reply does not
/// parse.
AudienceFeedback audience_feedback(const AudienceInput& input, provider::ChatProvider& provider,
                                   std::int64_t seed = 0);

}  // namespace debate::audience
