#include "debate/rehearsal/outline.hpp"

#include <algorithm>
#include <cstdio>

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate::rehearsal {

namespace {

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  std::string s(buf);
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string_view label(int level) {
  if (level == 0) return "Root Claim";
  return level % 2 == 1 ? "Opponent's Attack" : "Your Rebuttal";
}

void render_node(const RehearsalNode& node, int max_depth, std::string& out) {
  out.append(static_cast<std::size_t>(2 * std::max(0, node.level - 1)), ' ');
  out += "Level-" + std::to_string(node.level) + " " + std::string(label(node.level)) + ": \"claim\": \"" +
         node.claim_text() + "\", Scores: ";
  if (node.attack_score) out += "Attack Score: " + one_decimal(*node.attack_score) + ", ";
  if (node.support_score) out += "Support Score: " + one_decimal(*node.support_score) + ", ";
  out += "Strength: " + one_decimal(stored_strength(node, max_depth - node.level)) + "\n";
  for (const auto& c : node.children) render_node(c, max_depth, out);
}

std::optional<double> number_after(std::string_view s, std::string_view key) {
  const auto pos = s.find(key);
  if (pos == std::string_view::npos) return std::nullopt;
  const std::string rest(s.substr(pos + key.size()));
  try {
    return std::stod(rest);
  } catch (const std::exception&) {
    throw ParseError("outline: bad number after '" + std::string(key) + "'");
  }
}

}  // namespace

std::string render_outline(const RehearsalTree& tree) {
  std::string out;
  render_node(tree.root, tree.params.max_depth, out);
  return out;
}

std::vector<OutlineLine> parse_outline(std::string_view text) {
  std::vector<OutlineLine> out;
  for (const auto& raw : text::split_lines(text)) {
    auto line = text::trim(raw);
    if (line.size() >= 2 && line.substr(line.size() - 2) == "\\\\") line = text::trim(line.substr(0, line.size() - 2));
    if (line.empty()) continue;
    if (!text::starts_with_icase(line, "Level-")) throw ParseError("outline line does not start with Level-N");

    OutlineLine ol;
    std::size_t used = 0;
    try {
      ol.level = std::stoi(std::string(line.substr(6)), &used);
    } catch (const std::exception&) {
      throw ParseError("outline: bad level number");
    }
    const auto open = line.find("\"claim\": \"");
    const auto close = line.rfind("\", Scores:");
    if (open == std::string_view::npos || close == std::string_view::npos || close < open + 10) {
      throw ParseError("outline: cannot find the claim text");
    }
    ol.claim = std::string(line.substr(open + 10, close - open - 10));
    const auto scores = line.substr(close + 10);
    ol.attack_score = number_after(scores, "Attack Score:");
    ol.support_score = number_after(scores, "Support Score:");
    const auto st = number_after(scores, "Strength:");
    if (!st) throw ParseError("outline: missing Strength");
    ol.strength = *st;
    out.push_back(std::move(ol));
  }
  return out;
}

}  // namespace debate::rehearsal
