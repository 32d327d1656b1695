// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "debate/core/serialize.hpp"
#include "debate/core/validate.hpp"
#include "debate/flow/flow.hpp"
#include "debate/orchestrator/persistence.hpp"
#include "debate/provider/http.hpp"
#include "debate/rehearsal/outline.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "debate/semantic/semantic.hpp"
#include "debate/timing/timing.hpp"
#include "debate/util/text.hpp"
#include "oracles.hpp"
#include "stack.hpp"

using namespace debate;
using namespace debate::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << v;
  return os.str();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

Outcome fail(std::string why) { return {false, std::move(why)}; }

// 1 ------------------------------------------------------------------------

Outcome golden_fixture() {
  Stopwatch clock;
  const auto lines = rehearsal::parse_outline(read_fixture("golden_outline.txt"));
  if (lines.size() != 6) return fail("fixture has " + std::to_string(lines.size()) + " lines, expected 6");

  const auto motion = make_motion("This house would abolish the debt ceiling", "debt_ceiling");
  rehearsal::ScriptedArgumentGenerator generator;
  scoring::TableImpactScorer table;
  const auto root = script_outline(lines, motion, Stance::Pro, generator, table);
  RehearsalParams params;  // B = 3, L = 3, gamma = 0.8
  const auto tree = rehearsal::build_rehearsal_tree(root, motion, Stance::Pro, params, generator, table);

  std::vector<const RehearsalNode*> built;
  for_each_node(tree.root, [&](const RehearsalNode& n) { built.push_back(&n); });
  if (built.size() != lines.size()) return fail("built tree has " + std::to_string(built.size()) + " nodes");

  double worst = 0.0;
  std::string shown;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& n = *built[i];
    if (n.claim_text() != lines[i].claim) return fail("node order differs at line " + std::to_string(i + 1));
    const int k = params.max_depth - n.level;
    const double f = rehearsal::strength(n, k, params.decay);
    if (std::abs(f - stored_strength(n, k)) > 1e-12) return fail("stored and recursive strength disagree");
    worst = std::max(worst, std::abs(f - lines[i].strength));
    shown += (i ? " " : "") + fmt(f, 3) + "/" + fmt(lines[i].strength, 1);
  }
  const double secs = clock.seconds();
  if (worst > 0.1) return fail("max deviation " + fmt(worst) + " (" + shown + ")");
  if (secs >= 1.0) return fail("took " + fmt(secs, 3) + " s");
  return {true, "computed/displayed " + shown + ", max deviation " + fmt(worst, 3) + ", " + fmt(secs, 3) + " s"};
}

// 2 ------------------------------------------------------------------------

Outcome strength_oracle() {
  Stopwatch clock;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> depth(0, 4);
  std::uniform_int_distribution<int> branch(1, 3);
  int trees = 0;
  long checks = 0;
  double worst = 0.0;
  while (trees < 400) {
    RehearsalParams params;
    params.max_depth = depth(rng);
    params.max_branch = branch(rng);
    auto tree = random_rehearsal_tree(rng, params);
    rehearsal::compute_strengths(tree);
    ++trees;
    std::string problem;
    for_each_node(tree.root, [&](const RehearsalNode& n) {
      const int top = params.max_depth - n.level;
      if (static_cast<int>(n.strengths.size()) != top + 1) problem = "wrong number of stored strengths";
      for (int k = 0; k <= top + 1; ++k) {
        const double expect = exhaustive_strength(n, k, params.decay);
        const double rec = rehearsal::strength(n, k, params.decay);
        const double stored = stored_strength(n, k);
        worst = std::max({worst, std::abs(rec - expect), std::abs(stored - expect)});
        ++checks;
      }
    });
    if (!problem.empty()) return fail(problem);
  }
  const double secs = clock.seconds();
  if (worst > 1e-9) return fail("max deviation " + sci(worst));
  if (secs >= 10.0) return fail("took " + fmt(secs, 3) + " s");
  return {true, std::to_string(trees) + " trees, " + std::to_string(checks) + " (node, k) checks, max deviation " +
                    sci(worst) + ", " + fmt(secs, 3) + " s"};
}

// 3 ------------------------------------------------------------------------

struct Replay {
  FlowView view;
  int matched_records = 0;
};

Replay replay(const std::vector<SpokenTuple>& seq) {
  semantic::ExactMatcher matcher;
  Replay r{FlowView(Stance::Pro), 0};
  int turn = 0;
  for (const auto& s : seq) {
    const auto records =
        flow::apply_statement(r.view, {s.tuple}, s.speaker, semantic::kDefaultThreshold, matcher,
                              TurnStamp{Stage::Rebuttal, turn++});
    for (const auto& rec : records) r.matched_records += rec.matched_id.has_value();
  }
  return r;
}

Outcome flow_state_machine() {
  Stopwatch clock;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> length(1, 50);
  int tuples = 0;
  int matched = 0;
  for (int i = 0; i < 500; ++i) {
    const auto seq = random_tuple_sequence(rng, length(rng));
    tuples += static_cast<int>(seq.size());
    const auto a = replay(seq);
    const auto b = replay(seq);
    const auto id = "sequence " + std::to_string(i) + ": ";
    if (!(a.view == b.view) || doc::serialize(a.view.own) != doc::serialize(b.view.own) ||
        doc::serialize(a.view.opponent) != doc::serialize(b.view.opponent)) {
      return fail(id + "replay is not deterministic");
    }
    for (const auto* tree : {&a.view.own, &a.view.opponent}) {
      const auto problems = structural_problems(*tree);
      if (!problems.empty()) return fail(id + problems.front());
      const auto violations = validate_flow_tree(*tree);
      if (!violations.empty()) return fail(id + violations.front().code);
    }
    const int visits = total_visits(a.view.own) + total_visits(a.view.opponent);
    const int expect = expected_matched(seq);
    if (visits != expect || a.matched_records != expect) {
      return fail(id + "visits " + std::to_string(visits) + ", matched records " + std::to_string(a.matched_records) +
                  ", oracle " + std::to_string(expect));
    }
    matched += expect;
  }
  const double secs = clock.seconds();
  if (secs >= 5.0) return fail("took " + fmt(secs, 3) + " s");
  return {true, "500 sequences, " + std::to_string(tuples) + " tuples, " + std::to_string(matched) +
                    " matched, " + fmt(secs, 3) + " s"};
}

// 4 ------------------------------------------------------------------------

using RefSet = std::set<std::pair<int, int>>;  // (tree owner, node id)

Outcome candidate_rules() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> length(0, 40);
  std::uniform_int_distribution<int> coin(0, 1);
  semantic::ExactMatcher matcher;
  int checked = 0;
  for (int pair = 0; pair < 200; ++pair) {
    const Stance self = coin(rng) ? Stance::Pro : Stance::Con;
    FlowView view(self);
    for (const auto& s : random_tuple_sequence(rng, length(rng))) {
      flow::apply_statement(view, {s.tuple}, s.speaker, semantic::kDefaultThreshold, matcher);
    }
    RefSet own_side, other_side, other_leaves;
    for (const auto* tree : {&view.own, &view.opponent}) {
      tree->for_each([&](const FlowNode& n, int) {
        const std::pair<int, int> ref{static_cast<int>(tree->owner()), n.id};
        if (n.side == self) {
          own_side.insert(ref);
        } else {
          other_side.insert(ref);
          if (n.children.empty()) other_leaves.insert(ref);
        }
      });
    }
    for (const Stage stage : {Stage::Opening, Stage::Rebuttal, Stage::Closing}) {
      const auto actions = flow::candidate_actions(view.own, view.opponent, stage);
      int proposes = 0;
      RefSet reinforce, attack, rebut;
      for (const auto& a : actions) {
        if (a.kind == ActionKind::Propose) {
          ++proposes;
          if (a.target) return fail("Propose carries a target");
          continue;
        }
        if (!a.target) return fail("targeted action without a target");
        const std::pair<int, int> ref{static_cast<int>(a.target->tree_owner), a.target->node_id};
        auto& bucket = a.kind == ActionKind::Reinforce ? reinforce : a.kind == ActionKind::Attack ? attack : rebut;
        if (!bucket.insert(ref).second) return fail("duplicate candidate");
      }
      const auto where = "pair " + std::to_string(pair) + " " + std::string(to_string(stage)) + ": ";
      if (proposes != (stage == Stage::Opening ? 1 : 0)) return fail(where + "Propose count " + std::to_string(proposes));
      if (reinforce != own_side) return fail(where + "Reinforce targets differ from own-side nodes");
      if (attack != other_side) return fail(where + "Attack targets differ from opposite-side nodes");
      if (rebut != other_leaves) return fail(where + "Rebut targets differ from opposite-side leaves");
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " (tree pair, stage) cases"};
}

// 5 ------------------------------------------------------------------------

Outcome lookahead_table() {
  const struct {
    Stance side;
    Stage stage;
    int k;
  } table[] = {{Stance::Pro, Stage::Opening, 3},  {Stance::Con, Stage::Opening, 2},
               {Stance::Pro, Stage::Rebuttal, 1}, {Stance::Con, Stage::Rebuttal, 0},
               {Stance::Pro, Stage::Closing, 0},  {Stance::Con, Stage::Closing, 0}};
  std::string shown;
  for (const auto& row : table) {
    const int got = flow::remaining_rounds_k(row.stage, row.side);
    shown += std::string(shown.empty() ? "" : " ") + std::string(to_string(row.side)) + "-" +
             std::string(to_string(row.stage)) + "=" + std::to_string(got);
    if (got != row.k) return fail(shown + " (expected " + std::to_string(row.k) + ")");
  }
  return {true, shown};
}

// 6 ------------------------------------------------------------------------

bool achievable(const timing::TimeRange& range, double wpm, const timing::FitOptions& options) {
  for (int n = options.min_budget; n <= options.max_budget; ++n) {
    if (range.contains(n * 60.0 / wpm)) return true;
  }
  return false;
}

std::string random_sentences(std::mt19937_64& rng, int sentences) {
  static const char* words[] = {"policy", "students", "the", "costs", "rise", "and", "evidence", "shows", "that",
                                "many", "schools", "benefit", "from", "clear", "rules"};
  std::uniform_int_distribution<int> len(1, 25);
  std::uniform_int_distribution<int> pick(0, 14);
  std::uniform_int_distribution<int> end(0, 2);
  std::string out;
  for (int s = 0; s < sentences; ++s) {
    const int n = len(rng);
    for (int w = 0; w < n; ++w) {
      if (!out.empty()) out += ' ';
      out += words[pick(rng)];
    }
    out += ".!?"[end(rng)];
  }
  return out;
}

Outcome time_controller() {
  std::mt19937_64 rng(606);
  timing::RateEstimator estimator(130.0);
  const timing::FitOptions options;
  std::uniform_real_distribution<double> limit(60.0, 300.0);
  std::uniform_int_distribution<int> draft_words(20, 1500);

  int cases = 0, skipped = 0, worst_iters = 0;
  while (cases < 100) {
    const auto range = timing::TimeRange::for_limit(limit(rng));
    if (!achievable(range, 130.0, options)) {
      ++skipped;
      continue;
    }
    ExactReviser reviser;
    const auto draft = make_statement(Stance::Pro, Stage::Opening, make_words(draft_words(rng)));
    const auto r = timing::fit_to_time(draft, range, reviser, estimator, options);
    const int iters = static_cast<int>(r.trace.iterations.size());
    const double d = estimator.seconds(r.statement.text);
    if (r.trace.outcome != timing::FitOutcome::InRange || !range.contains(d) || iters > 10) {
      return fail("case " + std::to_string(cases) + ": outcome " + std::string(to_string(r.trace.outcome)) +
                  " after " + std::to_string(iters) + " iterations, duration " + fmt(d, 2) + " for [" +
                  fmt(range.lower_s, 2) + ", " + fmt(range.upper_s, 2) + "]");
    }
    worst_iters = std::max(worst_iters, iters);
    ++cases;
  }

  // Same search with the estimator running at a rate the controller does not
  // assume, so the first budget guess misses and the bracket has to be found.
  int off_rate_worst = 0;
  std::uniform_real_distribution<double> rate(100.0, 165.0);
  for (int i = 0; i < 100;) {
    timing::RateEstimator off(rate(rng));
    const auto range = timing::TimeRange::for_limit(limit(rng));
    if (!achievable(range, off.words_per_minute(), options)) continue;
    ExactReviser reviser;
    const auto draft = make_statement(Stance::Pro, Stage::Rebuttal, make_words(draft_words(rng)));
    const auto r = timing::fit_to_time(draft, range, reviser, off, options);
    const int iters = static_cast<int>(r.trace.iterations.size());
    if (r.trace.outcome != timing::FitOutcome::InRange || iters > 10) {
      return fail("off-rate case " + std::to_string(i) + ": " + std::string(to_string(r.trace.outcome)) + " after " +
                  std::to_string(iters) + " iterations at " + fmt(off.words_per_minute(), 1) + " wpm");
    }
    off_rate_worst = std::max(off_rate_worst, iters);
    ++i;
  }

  ConstantReviser stubborn(make_words(12));
  const auto draft = make_statement(Stance::Con, Stage::Rebuttal, make_words(900));
  const auto r = timing::fit_to_time(draft, timing::TimeRange::for_limit(240.0), stubborn, estimator, options);
  if (r.trace.outcome != timing::FitOutcome::MaxIterations || r.trace.iterations.size() != 10 ||
      stubborn.calls != 10) {
    return fail("constant reviser: outcome " + std::string(to_string(r.trace.outcome)) + " after " +
                std::to_string(r.trace.iterations.size()) + " iterations");
  }

  int cuts = 0;
  std::uniform_real_distribution<double> cut_limit(2.0, 120.0);
  std::uniform_int_distribution<int> sentence_count(1, 30);
  for (int i = 0; i < 300; ++i) {
    const auto text = random_sentences(rng, sentence_count(rng));
    const double lim = cut_limit(rng);
    const auto st = make_statement(Stance::Pro, Stage::Closing, text);
    const auto cut = timing::hard_cut(st, lim, estimator);
    const auto spans = timing::split_sentences(text);
    // Oracle: the longest whole-sentence prefix within the limit.
    std::string expect;
    for (const auto& sp : spans) {
      const std::string prefix(text::trim(std::string_view(text).substr(0, sp.end)));
      if (estimator.seconds(prefix) > lim) break;
      expect = prefix;
    }
    const auto id = "hard_cut case " + std::to_string(i) + ": ";
    if (cut.statement.text != expect) return fail(id + "kept \"" + cut.statement.text + "\"");
    if (timing::estimate_duration(cut.statement.text, estimator) > lim) return fail(id + "over the limit");
    if (!expect.empty() && std::string(".!?").find(expect.back()) == std::string::npos) {
      return fail(id + "does not end at a sentence boundary");
    }
    if (cut.trimmed != (expect != text::trim(text))) return fail(id + "trimmed flag wrong");
    cuts += cut.trimmed;
  }
  return {true, "100 achievable cases (" + std::to_string(skipped) + " unachievable skipped), max " +
                    std::to_string(worst_iters) + " iterations (" +
                    std::to_string(off_rate_worst) + " with a mismatched estimator rate); constant reviser stops at 10 with MaxIterations; " +
                    "300 hard cuts (" + std::to_string(cuts) + " trimmed) match the prefix oracle"};
}

// 7 and 8 ------------------------------------------------------------------

struct StubRun {
  orchestrator::RunResult result;
  std::map<std::string, std::string> files;
};

StubRun stub_run(const provider::ProviderConfig& config, provider::RecordMode mode,
                 const std::filesystem::path& recording, const std::filesystem::path& out, std::int64_t seed,
                 const std::string& motion) {
  auto stack = make_stack(config, mode, recording, seed);
  orchestrator::StagePipelineConfig pipeline;
  pipeline.seed = seed;
  orchestrator::DebateEngine engine(pipeline, stack->collaborators());
  orchestrator::RunOptions opts;
  opts.out_dir = out;
  StubRun r;
  r.result = orchestrator::run_debate(make_motion(motion, "m" + std::to_string(seed)), engine, opts);
  r.files = snapshot(out);
  return r;
}

std::string invalid_statement(const orchestrator::RunResult& r) {
  if (r.records.size() != 6 || r.state.transcript.size() != 6) {
    return std::to_string(r.state.transcript.size()) + " statements";
  }
  for (const auto& rec : r.records) {
    if (!rec.validity.valid()) {
      return orchestrator::slot_name(rec.turn, rec.side, rec.stage) + " invalid: " +
             text::join(rec.validity.reasons, "; ");
    }
  }
  return {};
}

Outcome end_to_end() {
  const auto dir = scratch_dir("acceptance_e2e");
  const std::string motion = "This house would ban homework in primary schools";
  provider::ProviderConfig simulated;

  const auto a = stub_run(simulated, provider::RecordMode::Record, dir / "a.jsonl", dir / "a", 7, motion);
  const auto b = stub_run(simulated, provider::RecordMode::Record, dir / "b.jsonl", dir / "b", 7, motion);
  if (auto bad = invalid_statement(a.result); !bad.empty()) return fail("run a: " + bad);
  if (auto bad = invalid_statement(b.result); !bad.empty()) return fail("run b: " + bad);
  if (a.files != b.files) return fail("run directories differ");

  // The replay config names a live model; any request reaching it would go
  // over the network.
  auto live = simulated;
  live.chat.kind = "openai";
  const auto before = provider::network_request_count();
  const auto c = stub_run(live, provider::RecordMode::Replay, dir / "a.jsonl", dir / "c", 7, motion);
  const auto calls = provider::network_request_count() - before;
  if (calls != 0) return fail("replay made " + std::to_string(calls) + " network requests");
  if (c.files != a.files) return fail("replayed run differs from the recorded one");
  std::filesystem::remove_all(dir);
  return {true, "6 valid statements, " + std::to_string(a.files.size()) +
                    " artifact files byte-identical across two runs and a replay, 0 network requests in replay"};
}

Outcome validity_rate() {
  const auto dir = scratch_dir("acceptance_validity");
  const std::vector<std::string> motions = {"This house would ban homework in primary schools",
                                            "This house believes social media does more harm than good",
                                            "This house would make voting compulsory",
                                            "This house supports a four day work week"};
  provider::ProviderConfig simulated;
  int runs = 0, statements = 0;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    auto stack = make_stack(simulated, provider::RecordMode::Off, {}, static_cast<std::int64_t>(i));
    orchestrator::StagePipelineConfig pipeline;
    pipeline.seed = static_cast<std::int64_t>(i);
    orchestrator::DebateEngine engine(pipeline, stack->collaborators());
    orchestrator::RunOptions opts;
    opts.out_dir = dir / std::to_string(i);
    const auto paired = orchestrator::run_paired(make_motion(motions[i]), engine, opts);
    for (const auto* r : {&paired.original, &paired.swapped}) {
      if (auto bad = invalid_statement(*r); !bad.empty()) return fail(motions[i] + ": " + bad);
      ++runs;
      statements += static_cast<int>(r->records.size());
    }
  }
  std::filesystem::remove_all(dir);
  std::cout << "  note: human-judged persuasiveness, win rates and opinion shift need live models and human\n"
               "        judges; they are not reproduced here. Criteria 1-7 and the validity check below stand\n"
               "        in for them.\n";
  return {true, std::to_string(runs) + " stub runs, " + std::to_string(statements) +
                    " engine statements, all format-valid and time-valid"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden fixture strengths", golden_fixture},
      {"strength oracle equivalence", strength_oracle},
      {"flow tree state machine", flow_state_machine},
      {"candidate action rules", candidate_rules},
      {"lookahead table", lookahead_table},
      {"time controller", time_controller},
      {"end-to-end determinism", end_to_end},
      {"non-reproducibility statement and validity rate", validity_rate},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
