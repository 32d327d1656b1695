#include "debate/audience/audience.hpp"

#include <array>

#include "debate/core/errors.hpp"
#include "debate/prompts/prompts.hpp"
#include "debate/util/text.hpp"

namespace debate::audience {

namespace {

constexpr std::string_view kRetrievalHeading = "## Retrieval Information";
constexpr std::string_view kInputHeading = "### Input Information";

std::string render_history(const std::vector<Statement>& history) {
  if (history.empty()) return "(no previous statements)";
  std::string out;
  for (const auto& s : history) {
    if (!out.empty()) out += "\n";
    out += "[" + std::string(to_string(s.side)) + " " + std::string(to_string(s.stage)) + "]\n" + s.text + "\n";
  }
  return out;
}

// Strips markdown decoration so both output variants reduce to "Label: text".
std::string normalize(std::string_view raw) {
  std::string s = text::replace_all(std::string(text::trim(raw)), "**", "");
  std::string_view v = text::trim(s);
  while (!v.empty() && v.front() == '#') v.remove_prefix(1);
  v = text::trim(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = text::trim(v.substr(1, v.size() - 2));
  // "3. Issue: ..." -> "Issue: ..."
  std::size_t i = 0;
  while (i < v.size() && v[i] >= '0' && v[i] <= '9') ++i;
  if (i > 0 && i + 1 < v.size() && v[i] == '.' && v[i + 1] == ' ') v = text::trim(v.substr(i + 2));
  if (v.size() >= 2 && v.front() == '-' && v[1] == ' ') v = text::trim(v.substr(2));
  return std::string(v);
}

bool is_heading(std::string_view line, std::string_view title) {
  return text::to_lower_ascii(line) == text::to_lower_ascii(title);
}

// "Label: rest" -> rest when the line starts with the label.
std::optional<std::string> after_label(std::string_view line, std::string_view label) {
  if (!text::starts_with_icase(line, label)) return std::nullopt;
  auto rest = text::trim(line.substr(label.size()));
  if (rest.empty() || rest.front() != ':') return std::nullopt;
  return std::string(text::trim(rest.substr(1)));
}

void append(std::string& field, std::string_view more) {
  if (more.empty()) return;
  if (!field.empty()) field += ' ';
  field += more;
}

}  // namespace

std::string assemble_prompt(const AudienceInput& input) {
  std::string tmpl = prompts::get("audience");
  if (!input.retrieved_tree) {
    const auto start = tmpl.find(kRetrievalHeading);
    const auto end = tmpl.find(kInputHeading);
    if (start == std::string::npos || end == std::string::npos || end < start) {
      throw DebateError("audience template lost its retrieval section markers");
    }
    tmpl.erase(start, end - start);
  }
  prompts::Slots slots{{"stage", std::string(to_string(input.statement.stage))},
                       {"side", std::string(to_string(input.statement.side))},
                       {"motion", input.motion.text},
                       {"history", prompts::fenced(render_history(input.history))},
                       {"statement", prompts::fenced(input.statement.text)}};
  if (input.retrieved_tree) slots["retrieval debate flow tree"] = prompts::fenced(*input.retrieved_tree);
  return prompts::render(tmpl, slots);
}

AudienceFeedback parse_feedback(const std::string& reply) {
  enum class Section { None, Analysis, Issues };
  static const std::array<std::string_view, 4> dims = {"Core Message Clarity", "Engagement Impact",
                                                       "Evidence Presentation", "Persuasive Elements"};
  AudienceFeedback fb;
  std::array<std::string*, 4> dim_fields = {&fb.clarity, &fb.engagement, &fb.evidence, &fb.persuasion};
  std::string* current = nullptr;
  Section section = Section::None;
  bool saw_analysis = false, saw_issues = false;
  int issue_part = -1;  // 0 issue, 1 impact, 2 suggestion

  for (const auto& raw : text::split_lines(reply)) {
    const auto line = normalize(raw);
    if (line.empty()) continue;
    if (is_heading(line, "Comprehensive Analysis")) {
      section = Section::Analysis;
      saw_analysis = true;
      current = nullptr;
      continue;
    }
    if (is_heading(line, "Critical Issues and Minimal Revision Suggestions")) {
      section = Section::Issues;
      saw_issues = true;
      current = nullptr;
      continue;
    }
    if (section == Section::Analysis) {
      bool matched = false;
      for (std::size_t d = 0; d < dims.size(); ++d) {
        if (auto rest = after_label(line, dims[d])) {
          current = dim_fields[d];
          append(*current, *rest);
          matched = true;
          break;
        }
      }
      if (!matched && current) append(*current, line);
      continue;
    }
    if (section == Section::Issues) {
      if (auto rest = after_label(line, "Issue")) {
        if (issue_part != -1 && issue_part != 2) throw ParseError("feedback issue is missing its impact or suggestion");
        fb.issues.push_back({*rest, "", ""});
        issue_part = 0;
        current = &fb.issues.back().issue;
      } else if (auto rest = after_label(line, "Impact on Audience")) {
        if (issue_part != 0) throw ParseError("feedback impact without a preceding issue");
        issue_part = 1;
        current = &fb.issues.back().impact;
        append(*current, *rest);
      } else if (auto rest = after_label(line, "Minimal Revision Suggestion")) {
        if (issue_part != 1) throw ParseError("feedback suggestion without a preceding impact");
        issue_part = 2;
        current = &fb.issues.back().suggestion;
        append(*current, *rest);
      } else if (current) {
        append(*current, line);
      }
    }
  }
  if (!saw_analysis) throw ParseError("feedback has no Comprehensive Analysis section");
  if (!saw_issues) throw ParseError("feedback has no Critical Issues section");
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (dim_fields[d]->empty()) throw ParseError("feedback dimension '" + std::string(dims[d]) + "' is empty");
  }
  for (const auto& is : fb.issues) {
    if (is.issue.empty() || is.impact.empty() || is.suggestion.empty()) {
      throw ParseError("feedback issue is missing one of issue, impact, suggestion");
    }
  }
  return fb;
}

std::string render_feedback(const AudienceFeedback& fb) {
  std::string out = "## Comprehensive Analysis\n";
  out += "**Core Message Clarity**: " + fb.clarity + "\n";
  out += "**Engagement Impact**: " + fb.engagement + "\n";
  out += "**Evidence Presentation**: " + fb.evidence + "\n";
  out += "**Persuasive Elements**: " + fb.persuasion + "\n\n";
  out += "## Critical Issues and Minimal Revision Suggestions\n";
  for (std::size_t i = 0; i < fb.issues.size(); ++i) {
    out += "**" + std::to_string(i + 1) + ". Issue: " + fb.issues[i].issue + "**\n";
    out += "   Impact on Audience: " + fb.issues[i].impact + "\n";
    out += "   Minimal Revision Suggestion: " + fb.issues[i].suggestion + "\n";
  }
  return out;
}

AudienceFeedback audience_feedback(const AudienceInput& input, provider::ChatProvider& provider, std::int64_t seed) {
  const auto prompt = assemble_prompt(input);
  for (int attempt = 0;; ++attempt) {
    provider::ChatRequest req;
    req.prompt = prompt;
    req.seed = seed + attempt;
    req.origin = "audience";
    try {
      return parse_feedback(provider.chat(req));
    } catch (const ParseError& e) {
      if (attempt >= 1) throw ParseError(std::string("audience feedback unparseable after retry: ") + e.what());
    }
  }
}

}  // namespace debate::audience
