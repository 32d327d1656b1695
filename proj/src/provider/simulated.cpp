#include "debate/provider/simulated.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "json.hpp"

#include "debate/timing/timing.hpp"
#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate::provider {

using Json = nlohmann::json;

namespace {

constexpr std::string_view kLenses[] = {"economic",   "ethical",     "practical",   "social",
                                        "legal",      "historical",  "environmental", "security",
                                        "educational", "democratic"};

constexpr std::string_view kReasons[] = {
    "the available data show the benefits outweigh the costs over time",
    "comparable cases elsewhere point in the same direction",
    "the people most affected would be better protected",
    "the alternative leaves the underlying problem untouched",
    "the incentives it creates reward responsible behaviour",
    "experts across the field have reached similar conclusions",
};

constexpr std::string_view kFillers[] = {
    "This point deserves careful attention from everyone here.",
    "The consequences reach well beyond a single budget cycle.",
    "Think about the families who live with these outcomes every day.",
    "That is the standard we ask the audience to apply.",
    "Good policy has to work in practice as well as on paper.",
    "The record of the past decade shows how much is at stake.",
    "We ask you to weigh the evidence rather than the rhetoric.",
    "Every serious analysis of this question returns to the same tension.",
};

std::uint32_t hash32(std::string_view s) {
  const auto d = sha256(s);
  return (std::uint32_t(d[0]) << 24) | (std::uint32_t(d[1]) << 16) | (std::uint32_t(d[2]) << 8) | d[3];
}

// Claim-safe text: no sentence or clause punctuation, single spaces.
std::string clean(std::string_view s) {
  std::string out;
  for (const char c : s) {
    if (c == '.' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"' || c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return text::join([&] {
    std::vector<std::string> w;
    for (const auto t : text::split_words(out)) w.emplace_back(t);
    return w;
  }(), " ");
}

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z' && !(s.size() > 1 && s[1] >= 'A' && s[1] <= 'Z')) {
    s[0] = static_cast<char>(s[0] - 'A' + 'a');
  }
  return s;
}

std::string between(std::string_view s, std::string_view start, std::string_view end) {
  const auto a = s.find(start);
  if (a == std::string_view::npos) return {};
  const auto from = a + start.size();
  const auto b = s.find(end, from);
  return std::string(text::trim(s.substr(from, b == std::string_view::npos ? std::string_view::npos : b - from)));
}

// Body of the first ``` fence after `label`.
std::string block_after(std::string_view s, std::string_view label) {
  const auto a = s.find(label);
  if (a == std::string_view::npos) return {};
  const auto open = s.find("```\n", a);
  if (open == std::string_view::npos) return {};
  const auto from = open + 4;
  const auto close = s.find("\n```", from);
  if (close == std::string_view::npos) return {};
  return std::string(s.substr(from, close - from));
}

// Number right after the first occurrence of `prefix` that is followed by digits.
std::optional<int> int_after(std::string_view s, std::string_view prefix) {
  for (auto a = s.find(prefix); a != std::string_view::npos; a = s.find(prefix, a + 1)) {
    std::size_t i = a + prefix.size();
    int v = 0;
    bool any = false;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      v = v * 10 + (s[i++] - '0');
      any = true;
    }
    if (any) return v;
  }
  return std::nullopt;
}

bool is_filler(std::string_view sentence) {
  auto s = std::string(text::trim(sentence));
  if (!s.empty() && s.back() == '.') s.pop_back();
  for (const auto f : kFillers) {
    std::string_view body = f.substr(0, f.size() - 1);
    if (body.substr(0, s.size()) == s && (s.size() == body.size() || body[s.size()] == ' ')) return true;
  }
  return false;
}

// Content sentences in order, then filler up to exactly n words. Content that
// does not fit is dropped from the end.
std::string compose(const std::vector<std::string>& content, int n, std::uint32_t salt) {
  std::vector<std::string> out;
  int count = 0;
  for (const auto& s : content) {
    const int w = static_cast<int>(text::word_count(s));
    if (count + w > n) break;
    out.push_back(s);
    count += w;
  }
  std::size_t i = salt % std::size(kFillers);
  while (count < n) {
    const auto f = kFillers[i++ % std::size(kFillers)];
    const int w = static_cast<int>(text::word_count(f));
    if (count + w <= n) {
      out.emplace_back(f);
      count += w;
    } else {
      auto part = text::first_words(f, static_cast<std::size_t>(n - count));
      if (!part.empty() && part.back() == '.') part.pop_back();
      out.push_back(part + ".");
      count = n;
    }
  }
  return text::join(out, " ");
}

std::vector<std::string> content_sentences(std::string_view statement) {
  std::vector<std::string> out;
  for (const auto& span : timing::split_sentences(statement)) {
    const auto s = statement.substr(span.begin, span.end - span.begin);
    if (!is_filler(s)) out.emplace_back(s);
  }
  return out;
}

std::string act_from(std::string_view prompt) {
  for (const auto key : {"Your side is to ", "You side is to ", "Your position is to ", "Your position: "}) {
    const auto a = prompt.find(key);
    if (a == std::string_view::npos) continue;
    const auto rest = prompt.substr(a + std::string_view(key).size());
    if (rest.substr(0, 7) == "support") return "support";
    if (rest.substr(0, 6) == "oppose") return "oppose";
  }
  return "support";
}

std::string reason_for(std::string_view key) {
  return std::string(kReasons[hash32(key) % std::size(kReasons)]);
}

// ----- claim generation -------------------------------------------------

std::string generate_claims(std::string_view prompt) {
  const auto motion = clean(between(prompt, "on the motion: ", "\n"));
  const auto act = act_from(prompt);
  const int num = std::max(1, int_after(prompt, "Generate ").value_or(3));
  const auto history = between(prompt, "Previous debate exchanges:\n", "\n## Output");

  std::string last_claim;
  for (const auto& line : text::split_lines(history)) {
    const auto close = line.find("] ");
    if (line.rfind("- [", 0) == 0 && close != std::string::npos) {
      auto rest = line.substr(close + 2);
      last_claim = rest.substr(0, rest.find(": "));
    }
  }

  Json args = Json::array();
  const auto offset = hash32(motion + act + last_claim);
  for (int i = 0; i < num; ++i) {
    const auto lens = std::string(kLenses[(offset + i) % std::size(kLenses)]);
    const auto suffix = i >= static_cast<int>(std::size(kLenses)) ? " in case " + std::to_string(i + 1) : "";
    std::string claim;
    if (last_claim.empty()) {
      claim = (act == "support" ? "Adopting the motion that " + lower_first(motion) + " delivers clear " + lens + " gains"
                                : "Rejecting the motion that " + lower_first(motion) + " avoids serious " + lens +
                                      " harms") +
              suffix;
    } else {
      claim = "The " + lens + " record undercuts the point that " +
              lower_first(text::first_words(clean(last_claim), 10)) + suffix;
    }
    args.push_back(Json{{"claim", claim}, {"argument", reason_for(claim)}});
  }
  return Json{{"arguments", args}}.dump();
}

// ----- claim selection --------------------------------------------------

std::string select_claims(std::string_view prompt) {
  const auto trees = block_after(prompt, "**Simulated Debate Flow Tree for each claim**:");
  std::vector<std::pair<double, std::string>> roots;
  for (const auto& line : text::split_lines(trees)) {
    if (line.rfind("Level-0 ", 0) != 0) continue;
    const auto claim = between(line, "\"claim\": \"", "\", Scores:");
    const auto pos = line.rfind("Strength: ");
    const double strength = pos == std::string::npos ? 0.0 : std::stod(line.substr(pos + 10));
    roots.emplace_back(strength, claim);
  }
  std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  Json claims = Json::array();
  for (std::size_t i = 0; i < roots.size() && i < 3; ++i) claims.push_back(roots[i].second);
  return Json{{"selection",
               {{"claims", claims},
                {"framework", "The claims move from immediate effects to long-term consequences"},
                {"explanation", "Each claim is the strongest survivor of its anticipated exchange"}}}}
      .dump();
}

// ----- definition -------------------------------------------------------

std::string define(std::string_view prompt) {
  const auto motion = clean(between(prompt, "The debate topic is: ", ". Your side"));
  return "We take the motion that " + lower_first(motion) +
         " in its ordinary public sense. The audience should judge which side better serves the long-term public "
         "interest, weighing evidence over assertion.";
}

// ----- stage statements -------------------------------------------------

struct ActionLine {
  std::string kind;
  std::string target;
  std::vector<std::string> prepared;
};

std::vector<std::string> quoted_parts(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while ((i = s.find('"', i)) != std::string_view::npos) {
    const auto j = s.find('"', i + 1);
    if (j == std::string_view::npos) break;
    out.emplace_back(s.substr(i + 1, j - i - 1));
    i = j + 1;
  }
  return out;
}

std::vector<ActionLine> parse_actions(std::string_view prompt) {
  std::vector<ActionLine> out;
  const auto section = between(prompt, "## Battlefields", "## Output");
  for (const auto& line : text::split_lines(section)) {
    if (line.rfind("- ", 0) != 0) continue;
    std::vector<std::string> fields;
    std::size_t start = 2;
    while (true) {
      const auto bar = line.find(" | ", start);
      fields.push_back(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
      if (bar == std::string::npos) break;
      start = bar + 3;
    }
    if (fields.size() < 3) continue;
    ActionLine a;
    a.kind = fields[0];
    const auto t = quoted_parts(fields[1]);
    if (!t.empty()) a.target = t.front();
    a.prepared = quoted_parts(fields[2]);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::string> list_lines(std::string_view block) {
  std::vector<std::string> out;
  for (const auto& raw : text::split_lines(block)) {
    auto line = text::trim(raw);
    if (line.rfind("- ", 0) == 0) {
      line.remove_prefix(2);
    } else {
      std::size_t i = 0;
      while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
      if (i > 0 && line.substr(i, 2) == ". ") line.remove_prefix(i + 2);
    }
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::string fallback_reply(std::string_view target) {
  return "the " + std::string(kLenses[hash32(target) % std::size(kLenses)]) + " evidence does not bear this out";
}

void add_action_sentences(const std::vector<ActionLine>& actions, std::vector<std::string>& content,
                          std::set<std::string>& addressed) {
  for (const auto& a : actions) {
    if (a.target.empty() || addressed.count(a.target)) continue;
    const auto t = clean(a.target);
    if (a.kind == "attack") {
      const auto c = a.prepared.empty() ? fallback_reply(t) : clean(a.prepared.front());
      content.push_back("Our opponents claim that " + t + "; we attack this point: " + c +
                        "; our reasoning is that " + reason_for(c) + ".");
    } else if (a.kind == "rebut") {
      const auto c = a.prepared.empty() ? fallback_reply(t) : clean(a.prepared.front());
      content.push_back("Our opponents attacked with the point that " + t + "; we rebut this: " + c +
                        "; our reasoning is that " + reason_for(c) + ".");
    } else if (a.kind == "reinforce") {
      content.push_back("We reinforce our claim that " + t + "; further support: " + reason_for(t) + ".");
    } else {
      continue;
    }
    addressed.insert(a.target);
  }
}

std::string statement_reply(std::string_view prompt, std::string_view stage) {
  const auto act = act_from(prompt);
  const int n = int_after(prompt, "statement of ").value_or(300);
  std::vector<std::string> content;
  std::set<std::string> addressed;

  if (stage == "opening") {
    content.push_back("We " + act + " the motion.");
    for (const auto& s : content_sentences(block_after(prompt, "**Definition**:"))) content.push_back(s);
    for (const auto& claim : list_lines(block_after(prompt, "**Your Main Claims**:"))) {
      const auto c = clean(claim);
      content.push_back("Our claim is that " + c + "; our reasoning is that " + reason_for(c) + ".");
      addressed.insert(claim);
    }
    add_action_sentences(parse_actions(prompt), content, addressed);
  } else if (stage == "rebuttal") {
    content.push_back("We continue to " + act + " the motion.");
    add_action_sentences(parse_actions(prompt), content, addressed);
  } else {
    content.push_back("In closing, we " + act + " the motion.");
    const auto own_side = act == "support" ? "[pro]" : "[con]";
    for (const auto& line : text::split_lines(block_after(prompt, "**Your Tree**:"))) {
      // Depth-1 lines are the main claims: two spaces, then the fields.
      if (line.rfind("  [", 0) != 0 || line.rfind("   ", 0) == 0) continue;
      if (line.compare(2, std::string_view(own_side).size(), own_side) != 0) continue;
      const auto pos = line.find("] ", 2);
      if (pos == std::string::npos) continue;
      const auto claim = clean(line.substr(pos + 2));
      content.push_back("We reinforce our claim that " + claim +
                        "; further support: the exchanges in this debate left it standing.");
    }
  }
  std::string plan = "**" + std::string(stage == "opening" ? "Opening" : stage == "rebuttal" ? "Rebuttal" : "Closing") +
                     " Plan**: Lead with the highest-importance battlefield, give each point an equal share of the " +
                     std::to_string(n) + " words, and close on the stakes.\n";
  return plan + "**Statement**: " + compose(content, n, hash32(prompt));
}

// ----- extraction -------------------------------------------------------

std::string extract(std::string_view prompt) {
  const auto statement = block_after(prompt, "## Statement");
  Json tuples = Json::array();
  const auto split2 = [](std::string_view s, std::string_view sep) -> std::optional<std::pair<std::string, std::string>> {
    const auto p = s.find(sep);
    if (p == std::string_view::npos) return std::nullopt;
    return std::make_pair(std::string(s.substr(0, p)), std::string(s.substr(p + sep.size())));
  };
  for (const auto& span : timing::split_sentences(statement)) {
    auto s = std::string(statement.substr(span.begin, span.end - span.begin));
    if (!s.empty() && s.back() == '.') s.pop_back();
    constexpr std::string_view kReason = "; our reasoning is that ";
    if (s.rfind("Our claim is that ", 0) == 0) {
      if (auto p = split2(s.substr(18), kReason)) {
        tuples.push_back({{"action", "propose"}, {"claim", p->first}, {"argument", p->second}});
      }
    } else if (s.rfind("Our opponents claim that ", 0) == 0) {
      auto p = split2(s.substr(25), "; we attack this point: ");
      if (!p) continue;
      auto q = split2(p->second, kReason);
      if (!q) continue;
      tuples.push_back({{"action", "attack"}, {"claim", q->first}, {"argument", q->second}, {"target", p->first}});
    } else if (s.rfind("Our opponents attacked with the point that ", 0) == 0) {
      auto p = split2(s.substr(43), "; we rebut this: ");
      if (!p) continue;
      auto q = split2(p->second, kReason);
      if (!q) continue;
      tuples.push_back({{"action", "rebut"}, {"claim", q->first}, {"argument", q->second}, {"target", p->first}});
    } else if (s.rfind("We reinforce our claim that ", 0) == 0) {
      if (auto p = split2(s.substr(28), "; further support: ")) {
        tuples.push_back({{"action", "reinforce"}, {"claim", p->first}, {"argument", p->second}, {"target", p->first}});
      }
    }
  }
  return Json{{"tuples", tuples}}.dump();
}

// ----- audience ---------------------------------------------------------

std::string audience(std::string_view prompt) {
  const auto stage = between(prompt, "barriers to audience understanding in the ", " statement");
  const auto statement = block_after(prompt, "Statement to be evaluated**:");
  const auto words = text::word_count(statement);
  const auto sentences = content_sentences(statement).size();
  const bool retrieved = prompt.find("## Retrieval Information") != std::string_view::npos;
  std::string out = "[Comprehensive Analysis]\n";
  out += "Core Message Clarity: The " + stage + " statement states its position early and develops " +
         std::to_string(sentences) + " substantive points in order.\n";
  out += "Engagement Impact: The delivery is steady across " + std::to_string(words) +
         " words but the repeated framing sentences lower the energy.\n";
  out += "Evidence Presentation: Reasons are given for each point but concrete figures and sources are sparse.\n";
  out += std::string("Persuasive Elements: The stakes are stated") +
         (retrieved ? " and the allocation resembles the human debate retrieved for comparison.\n"
                    : " and each point ties back to the motion.\n");
  out += "[Critical Issues and Minimal Revision Suggestions]\n";
  out += "Issue: Few concrete figures support the central claims.\n";
  out += "Impact on Audience: Listeners may treat the points as assertion rather than evidence.\n";
  out += "Minimal Revision Suggestion: Attach one specific figure or source to the strongest claim.\n";
  out += "Issue: Transitions between points are abrupt.\n";
  out += "Impact on Audience: The structure is harder to follow on first hearing.\n";
  out += "Minimal Revision Suggestion: Add a short signpost before each new point.\n";
  return out;
}

// ----- revisions --------------------------------------------------------

std::string revise(std::string_view prompt, std::string_view statement_label, std::string_view budget_prefix) {
  const auto statement = block_after(prompt, statement_label);
  const int n = int_after(prompt, budget_prefix).value_or(static_cast<int>(text::word_count(statement)));
  return "**Statement**: " + compose(content_sentences(statement), n, hash32(prompt));
}

// ----- impact -----------------------------------------------------------

ChatReply impact(std::string_view prompt) {
  const auto d = sha256(prompt);
  double w[3];
  for (int i = 0; i < 3; ++i) w[i] = 1.0 + d[i];
  const double total = w[0] + w[1] + w[2];
  TokenProbabilities probs{{"0", w[0] / total}, {"1", w[1] / total}, {"2", w[2] / total}};
  const auto top = std::max_element(w, w + 3) - w;
  return {std::to_string(top), probs};
}

}  // namespace

ChatReply SimulatedChatProvider::complete(const ChatRequest& request) {
  const std::string_view p = request.prompt;
  const auto has = [&](std::string_view s) { return p.find(s) != std::string_view::npos; };
  if (p.rfind("## Task: Generate Strategic Counter-Arguments", 0) == 0) return {generate_claims(p), std::nullopt};
  if (p.rfind("## Task: Select Persuasive Claims", 0) == 0) return {select_claims(p), std::nullopt};
  if (p.rfind("## Task: Define the Debate Topic", 0) == 0) return {define(p), std::nullopt};
  if (p.rfind("## Task: Extract Debate Actions", 0) == 0) return {extract(p), std::nullopt};
  if (p.rfind("## Task: Revise the Statement", 0) == 0) {
    return {revise(p, "## Draft Statement", "revised statement of "), std::nullopt};
  }
  if (p.rfind("## Task: Adjust Statement Length", 0) == 0) {
    return {revise(p, "## Statement", "so that it is "), std::nullopt};
  }
  if (p.rfind("## Your Task", 0) == 0 && has("panel of debate audience")) return {audience(p), std::nullopt};
  if (p.rfind("You are given a chain of arguments", 0) == 0) return impact(p);
  if (has("Now it comes the opening phase")) return {statement_reply(p, "opening"), std::nullopt};
  if (has("Now it comes the rebuttal phase")) return {statement_reply(p, "rebuttal"), std::nullopt};
  if (has("Now it comes the closing statement")) return {statement_reply(p, "closing"), std::nullopt};
  throw ProviderError("simulated model does not recognise this prompt: '" + text::first_words(p, 8) + "'");
}

}  // namespace debate::provider
