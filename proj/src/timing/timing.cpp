#include "debate/timing/timing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "debate/util/hash.hpp"
#include "debate/util/text.hpp"

namespace debate::timing {

void TimeRange::validate() const {
  if (!(lower_s > 0.0 && lower_s < upper_s)) {
    throw PreconditionError("time range must satisfy 0 < lower < upper");
  }
}

TimeRange TimeRange::for_limit(double limit_s, double lower_fraction) {
  TimeRange r{limit_s * lower_fraction, limit_s};
  r.validate();
  return r;
}

RateEstimator::RateEstimator(double words_per_minute) : wpm_(words_per_minute) {
  if (!(wpm_ > 0.0)) throw PreconditionError("speaking rate must be positive");
}

double RateEstimator::seconds(std::string_view text) {
  return static_cast<double>(text::word_count(text)) * 60.0 / wpm_;
}

double estimate_duration(std::string_view text, DurationEstimator& estimator) {
  if (text::trim(text).empty()) return 0.0;
  const double t = estimator.seconds(text);
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DebateError("duration estimator returned a non-positive duration for nonempty text");
  }
  return t;
}

std::string_view to_string(FitOutcome o) { return o == FitOutcome::InRange ? "in_range" : "max_iterations"; }

FitOutcome parse_fit_outcome(std::string_view s) {
  if (s == "in_range") return FitOutcome::InRange;
  if (s == "max_iterations") return FitOutcome::MaxIterations;
  throw ParseError("unknown fit outcome: " + std::string(s));
}

FitResult fit_to_time(const Statement& draft, const TimeRange& range, Reviser& reviser,
                      DurationEstimator& estimator, const FitOptions& options) {
  range.validate();
  if (options.max_iter < 0) throw PreconditionError("max_iter must be >= 0");
  if (options.min_budget < 1 || options.min_budget > options.max_budget) {
    throw PreconditionError("word budget clamp must satisfy 1 <= min <= max");
  }

  FitResult result{draft, {}};
  FitTrace& trace = result.trace;
  try {
    trace.initial_duration_s = estimate_duration(draft.text, estimator);
  } catch (const std::exception& e) {
    throw FitError(std::string("estimating the draft failed: ") + e.what(), trace);
  }
  result.statement.estimated_duration = trace.initial_duration_s;
  if (range.contains(trace.initial_duration_s)) {
    trace.outcome = FitOutcome::InRange;
    return result;
  }

  const auto clamp = [&](long long n) {
    return static_cast<int>(std::clamp<long long>(n, options.min_budget, options.max_budget));
  };
  const double words_per_second = options.words_per_minute / 60.0;
  std::optional<int> lo, hi;  // budgets known to land short / long

  // One revision at budget n; returns true once the statement is in range.
  const auto probe = [&](int n) {
    std::string revised;
    double t = 0.0;
    try {
      revised = reviser.revise(result.statement.text, n);
      t = estimate_duration(revised, estimator);
    } catch (const std::exception& e) {
      throw FitError("revision at budget " + std::to_string(n) + " failed: " + e.what(), trace);
    }
    result.statement = make_statement(draft.side, draft.stage, std::move(revised), draft.plan);
    result.statement.estimated_duration = t;
    if (t < range.lower_s) {
      lo = n;
    } else if (t > range.upper_s) {
      hi = n;
    }
    trace.iterations.push_back({n, t, sha256_hex(result.statement.text), lo.value_or(-1), hi.value_or(-1)});
    return range.contains(t);
  };

  int budget = clamp(std::llround(words_per_second * 0.5 * (range.lower_s + range.upper_s)));
  int gap = 0;
  while (static_cast<int>(trace.iterations.size()) < options.max_iter) {
    if (probe(budget)) {
      trace.outcome = FitOutcome::InRange;
      return result;
    }
    if (lo && hi) {
      // Bisect; rounding up makes an adjacent bracket re-probe its long end.
      budget = *lo + (*hi - *lo + 1) / 2;
      if (*hi <= *lo) budget = *hi;
      continue;
    }
    // Only one end known: double the gap from it toward the other end.
    gap = gap == 0 ? std::max(1, budget) : gap * 2;
    if (lo) {
      budget = clamp(static_cast<long long>(*lo) + gap);
    } else {
      budget = clamp(static_cast<long long>(*hi) - gap / 2);
    }
  }
  trace.outcome = FitOutcome::MaxIterations;
  return result;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t begin = i;
    std::size_t end = text.size();
    for (std::size_t j = i; j < text.size(); ++j) {
      const char c = text[j];
      if ((c == '.' || c == '!' || c == '?') && (j + 1 == text.size() || is_space(text[j + 1]))) {
        end = j + 1;
        break;
      }
    }
    // A trailing fragment ends at its last non-space character.
    std::size_t trimmed_end = end;
    while (trimmed_end > begin && is_space(text[trimmed_end - 1])) --trimmed_end;
    spans.push_back({begin, trimmed_end});
    i = end;
  }
  return spans;
}

HardCutResult hard_cut(const Statement& statement, double limit_s, DurationEstimator& estimator,
                       const SentenceSplitter& splitter) {
  if (!(limit_s > 0.0)) throw PreconditionError("hard cut limit must be positive");
  HardCutResult out{statement, false, false};
  if (estimate_duration(statement.text, estimator) <= limit_s) {
    out.statement.estimated_duration = estimate_duration(statement.text, estimator);
    return out;
  }
  const auto spans = splitter(statement.text);
  std::optional<std::size_t> best_end;
  for (const auto& span : spans) {
    const auto prefix = std::string_view(statement.text).substr(0, span.end);
    if (estimate_duration(prefix, estimator) <= limit_s) best_end = span.end;
  }
  out.trimmed = true;
  if (!best_end) {
    out.emptied = true;
    out.statement = make_statement(statement.side, statement.stage, "", statement.plan);
    out.statement.estimated_duration = 0.0;
    return out;
  }
  out.statement = make_statement(statement.side, statement.stage, statement.text.substr(0, *best_end), statement.plan);
  out.statement.estimated_duration = estimate_duration(out.statement.text, estimator);
  return out;
}

}  // namespace debate::timing
