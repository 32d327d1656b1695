#include <gtest/gtest.h>

#include "debate/timing/timing.hpp"
#include "oracles.hpp"

using namespace debate;
using namespace debate::timing;
using namespace debate::testing;

TEST(Rate, SecondsFromWords) {
  RateEstimator e(130.0);
  EXPECT_DOUBLE_EQ(e.seconds(make_words(130)), 60.0);
  EXPECT_DOUBLE_EQ(estimate_duration("", e), 0.0);
  EXPECT_THROW(RateEstimator(0.0), PreconditionError);
}

TEST(Range, ForLimit) {
  const auto r = TimeRange::for_limit(240.0);
  EXPECT_DOUBLE_EQ(r.lower_s, 228.0);
  EXPECT_DOUBLE_EQ(r.upper_s, 240.0);
  EXPECT_TRUE(r.contains(240.0));
  EXPECT_FALSE(r.contains(227.9));
  EXPECT_THROW((TimeRange{5.0, 5.0}).validate(), PreconditionError);
}

TEST(Fit, InRangeDraftNeedsNoRevision) {
  RateEstimator e;
  ExactReviser r;
  const auto draft = make_statement(Stance::Pro, Stage::Opening, make_words(510));
  const auto out = fit_to_time(draft, TimeRange::for_limit(240.0), r, e);
  EXPECT_EQ(out.trace.outcome, FitOutcome::InRange);
  EXPECT_TRUE(out.trace.iterations.empty());
  EXPECT_EQ(r.calls, 0);
  EXPECT_EQ(out.statement.text, draft.text);
}

TEST(Fit, FirstProbeUsesRateBudget) {
  RateEstimator e;
  ExactReviser r;
  const auto draft = make_statement(Stance::Pro, Stage::Opening, make_words(900));
  const auto out = fit_to_time(draft, TimeRange::for_limit(240.0), r, e);
  ASSERT_EQ(out.trace.iterations.size(), 1u);
  // Midpoint of [228, 240] at 130 wpm.
  EXPECT_EQ(out.trace.iterations[0].budget, 507);
  EXPECT_EQ(out.statement.word_count, 507u);
  EXPECT_DOUBLE_EQ(out.trace.initial_duration_s, 900 * 60.0 / 130.0);
}

TEST(Fit, SlowSpeakerNeedsSearch) {
  RateEstimator slow(100.0);
  ExactReviser r;
  const auto draft = make_statement(Stance::Con, Stage::Closing, make_words(50));
  const auto range = TimeRange::for_limit(120.0);
  const auto out = fit_to_time(draft, range, r, slow);
  EXPECT_EQ(out.trace.outcome, FitOutcome::InRange);
  EXPECT_GT(out.trace.iterations.size(), 1u);
  EXPECT_LE(out.trace.iterations.size(), 10u);
  EXPECT_TRUE(range.contains(slow.seconds(out.statement.text)));
}

TEST(Fit, StubbornReviserHitsMaxIterations) {
  RateEstimator e;
  ConstantReviser r(make_words(10));
  FitOptions o;
  o.max_iter = 4;
  const auto out = fit_to_time(make_statement(Stance::Pro, Stage::Opening, make_words(20)),
                               TimeRange::for_limit(240.0), r, e, o);
  EXPECT_EQ(out.trace.outcome, FitOutcome::MaxIterations);
  EXPECT_EQ(out.trace.iterations.size(), 4u);
  EXPECT_EQ(r.calls, 4);
}

TEST(Fit, ReviserFailureCarriesTrace) {
  RateEstimator e;
  struct Flaky : Reviser {
    int calls = 0;
    std::string revise(const std::string&, int budget) override {
      if (++calls == 2) throw std::runtime_error("model went away");
      return make_words(budget / 2);
    }
  } r;
  try {
    fit_to_time(make_statement(Stance::Pro, Stage::Opening, make_words(50)), TimeRange::for_limit(240.0), r, e);
    FAIL();
  } catch (const FitError& err) {
    EXPECT_EQ(err.trace().iterations.size(), 1u);
  }
}

TEST(Sentences, Split) {
  const std::string s = "One two. Three? Four!  Five";
  const auto spans = split_sentences(s);
  ASSERT_EQ(spans.size(), 4u);
  EXPECT_EQ(s.substr(spans[0].begin, spans[0].end - spans[0].begin), "One two.");
  EXPECT_EQ(s.substr(spans[3].begin, spans[3].end - spans[3].begin), "Five");
  EXPECT_EQ(split_sentences("e.g.works").size(), 1u);
}

TEST(HardCut, KeepsWholeSentences) {
  RateEstimator e(60.0);  // one word per second
  const auto st = make_statement(Stance::Pro, Stage::Closing, "a b c. d e f. g h i.");
  const auto cut = hard_cut(st, 7.0, e);
  EXPECT_TRUE(cut.trimmed);
  EXPECT_EQ(cut.statement.text, "a b c. d e f.");
  EXPECT_DOUBLE_EQ(cut.statement.estimated_duration.value(), 6.0);

  const auto none = hard_cut(st, 2.0, e);
  EXPECT_TRUE(none.emptied);
  EXPECT_TRUE(none.statement.text.empty());

  const auto fits = hard_cut(st, 100.0, e);
  EXPECT_FALSE(fits.trimmed);
  EXPECT_EQ(fits.statement.text, st.text);
  EXPECT_THROW(hard_cut(st, 0.0, e), PreconditionError);
}
