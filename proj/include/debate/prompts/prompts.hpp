#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace debate::prompts {

using Slots = std::map<std::string, std::string>;

/// Template text by asset name (file stem under assets/prompts). Throws
/// DebateError for unknown names.
const std::string& get(std::string_view name);
std::vector<std::string> names();

/// Replaces each "{key}" whose key is in `slots`, in a single pass, so slot
/// values are never themselves substituted. Braces with unknown keys (JSON
/// examples in the templates) are left alone.
std::string render(std::string_view text, const Slots& slots);
std::string render_named(std::string_view name, const Slots& slots);

/// Wraps multi-line input in a ``` fence so it reads as one block.
std::string fenced(std::string_view body);

/// Text following the last "**Statement**:" (or "Statement:") marker, trimmed.
/// Falls back to the whole reply when there is no marker. `plan`, when given,
/// receives everything before the marker.
std::string extract_statement(std::string_view reply, std::string* plan = nullptr);

/// First {...} JSON object in a reply, tolerating ```json fences and prose
/// around it. Throws ParseError when none parses.
std::string extract_json_object(std::string_view reply);

}  // namespace debate::prompts
