#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "debate/core/errors.hpp"
#include "debate/core/types.hpp"

namespace debate::timing {

inline constexpr double kDefaultWordsPerMinute = 130.0;

struct TimeRange {
  double lower_s = 0.0;
  double upper_s = 0.0;

  /// Throws PreconditionError unless 0 < lower < upper.
  void validate() const;
  bool contains(double seconds) const { return seconds >= lower_s && seconds <= upper_s; }

  /// [fraction * limit, limit].
  static TimeRange for_limit(double limit_s, double lower_fraction = 0.95);
};

class DurationEstimator {
 public:
  virtual ~DurationEstimator() = default;
  virtual double seconds(std::string_view text) = 0;
};

/// words / rate minutes. A pure function of the word count.
class RateEstimator : public DurationEstimator {
 public:
  explicit RateEstimator(double words_per_minute = kDefaultWordsPerMinute);
  double seconds(std::string_view text) override;
  double words_per_minute() const { return wpm_; }

 private:
  double wpm_;
};

/// Seconds for `text`. Empty text is 0 (callers treat it as degenerate);
/// nonempty text must come back strictly positive.
double estimate_duration(std::string_view text, DurationEstimator& estimator);

/// Rewrites a statement toward a word budget.
class Reviser {
 public:
  virtual ~Reviser() = default;
  virtual std::string revise(const std::string& statement, int word_budget) = 0;
};

enum class FitOutcome { InRange, MaxIterations };

std::string_view to_string(FitOutcome o);
FitOutcome parse_fit_outcome(std::string_view s);

struct FitIteration {
  int budget = 0;
  double duration_s = 0.0;
  std::string statement_hash;
  /// Bracket after this iteration; -1 while an endpoint is unknown.
  int interval_lo = -1;
  int interval_hi = -1;

  bool operator==(const FitIteration&) const = default;
};

struct FitTrace {
  double initial_duration_s = 0.0;
  std::vector<FitIteration> iterations;
  FitOutcome outcome = FitOutcome::InRange;

  bool operator==(const FitTrace&) const = default;
};

struct FitOptions {
  int max_iter = 10;
  double words_per_minute = kDefaultWordsPerMinute;
  int min_budget = 30;
  int max_budget = 2000;
};

struct FitResult {
  Statement statement;
  FitTrace trace;
};

/// Reviser or estimator failure during a fit; carries the trace so far.
class FitError : public DebateError {
 public:
  FitError(const std::string& what, FitTrace trace) : DebateError(what), trace_(std::move(trace)) {}
  const FitTrace& trace() const { return trace_; }

 private:
  FitTrace trace_;
};

/// Revises `draft` until its duration lands in `range`. The first probe uses
/// the rate-based budget for the range midpoint; the opposite bracket end is
/// found by doubling the budget gap, then the bracket is bisected. Stops at
/// the first in-range statement, or after max_iter revisions returning the
/// latest one.
FitResult fit_to_time(const Statement& draft, const TimeRange& range, Reviser& reviser,
                      DurationEstimator& estimator, const FitOptions& options = {});

struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the terminal punctuation
};

using SentenceSplitter = std::function<std::vector<SentenceSpan>(std::string_view)>;

/// A sentence ends at '.', '!' or '?' followed by whitespace or end of text.
/// A trailing fragment without terminal punctuation is its own sentence.
std::vector<SentenceSpan> split_sentences(std::string_view text);

struct HardCutResult {
  Statement statement;
  bool trimmed = false;
  /// Even the first sentence exceeded the limit; the statement is empty.
  bool emptied = false;
};

/// Keeps the longest sentence-aligned prefix whose estimated duration fits
/// within `limit_s`.
HardCutResult hard_cut(const Statement& statement, double limit_s, DurationEstimator& estimator,
                       const SentenceSplitter& splitter = split_sentences);

}  // namespace debate::timing
