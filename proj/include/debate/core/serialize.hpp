#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "debate/core/flow_tree.hpp"
#include "debate/core/rehearsal_tree.hpp"
#include "debate/core/state.hpp"
#include "debate/core/types.hpp"

// Canonical document format: UTF-8 JSON, keys sorted, absent optionals
// omitted, wrapped in {"kind", "schema_version", "value"}. Parsing is strict:
// missing required fields, unknown enum values and repeated node ids (a node
// reachable twice) are ParseErrors.
namespace debate::doc {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

Json wrap(std::string_view kind, Json value);
/// Checks schema_version and kind, returns the payload.
Json unwrap(const Json& document, std::string_view kind);
Json parse_json(std::string_view text);

/// Fetches a required member or throws ParseError naming it.
const Json& require(const Json& j, std::string_view key);

Json to_json(const Motion& m);
Motion motion_from_json(const Json& j);
Json to_json(const Claim& c);
Claim claim_from_json(const Json& j);
Json to_json(const Argument& a);
Argument argument_from_json(const Json& j);
Json to_json(const ActionTuple& t);
ActionTuple action_tuple_from_json(const Json& j);
Json to_json(const Statement& s);
Statement statement_from_json(const Json& j);
Json to_json(const DebateFlowTree& t);
DebateFlowTree flow_tree_from_json(const Json& j);
Json to_json(const RehearsalTree& t);
RehearsalTree rehearsal_tree_from_json(const Json& j);
Json to_json(const CandidateAction& a);
CandidateAction candidate_action_from_json(const Json& j);
Json to_json(const Battlefield& b);
Battlefield battlefield_from_json(const Json& j);
Json to_json(const DebateState& s);
DebateState debate_state_from_json(const Json& j);

std::string serialize(const DebateFlowTree& t);
std::string serialize(const RehearsalTree& t);
std::string serialize(const DebateState& s);

DebateFlowTree parse_flow_tree(std::string_view document);
RehearsalTree parse_rehearsal_tree(std::string_view document);
DebateState parse_debate_state(std::string_view document);

}  // namespace debate::doc
