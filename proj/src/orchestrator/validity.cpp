#include "debate/orchestrator/validity.hpp"

#include <cctype>
#include <cstdio>
#include <vector>

#include "debate/util/text.hpp"

namespace debate::orchestrator {

namespace {

constexpr const char* kMetaPhrases[] = {
    "i will provide feedback on",
    "as suggested by the reviewer",
    "as the reviewer suggested",
    "based on the feedback",
    "based on the audience feedback",
    "here is the revised",
    "here's the revised",
    "revised statement:",
    "opening plan**",
    "rebuttal plan**",
    "closing plan**",
    "word count:",
    "(word count",
    "allocate your word budget",
};

// Phrases that only make sense from the other side of the motion.
const std::vector<const char*> kProOnly = {"we support the motion", "we are for the motion", "as the proposition",
                                    "we stand in favour of the motion", "we stand in favor of the motion"};
const std::vector<const char*> kConOnly = {"we oppose the motion", "we are against the motion", "as the opposition",
                                    "we stand against the motion"};

bool is_bullet(std::string_view line) {
  if (line.empty()) return false;
  if (line.substr(0, 2) == "- " || line.substr(0, 2) == "* " || line.substr(0, 4) == "\xE2\x80\xA2 ") return true;
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  return i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') && line[i + 1] == ' ';
}

}  // namespace

ValidityReport validate_statement(const Statement& statement, double limit_s, timing::DurationEstimator& estimator) {
  ValidityReport r;
  const auto body = text::trim(statement.text);
  if (body.empty()) {
    r.format_valid = false;
    r.reasons.push_back("format: statement is empty");
  }

  const auto lower = text::to_lower_ascii(statement.text);
  for (const auto* p : kMetaPhrases) {
    if (lower.find(p) != std::string::npos) {
      r.format_valid = false;
      r.reasons.push_back(std::string("format: meta text \"") + p + "\"");
    }
  }
  const auto& wrong = statement.side == Stance::Pro ? kConOnly : kProOnly;
  for (const auto* p : wrong) {
    if (lower.find(p) != std::string::npos) {
      r.format_valid = false;
      r.reasons.push_back(std::string("format: speaks for the other side \"") + p + "\"");
    }
  }

  std::size_t lines = 0, bullets = 0;
  for (const auto& raw : text::split_lines(body)) {
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    ++lines;
    if (is_bullet(line)) ++bullets;
  }
  if (lines >= 2 && bullets == lines) {
    r.format_valid = false;
    r.reasons.push_back("format: only lists key points");
  }

  const double t = timing::estimate_duration(statement.text, estimator);
  if (t > limit_s) {
    r.time_valid = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "time: %.1f s exceeds the %.1f s limit", t, limit_s);
    r.reasons.push_back(buf);
  }
  return r;
}

ValidityReport validate_statement(const Statement& statement, timing::DurationEstimator& estimator) {
  return validate_statement(statement, default_time_limit(statement.stage), estimator);
}

}  // namespace debate::orchestrator
