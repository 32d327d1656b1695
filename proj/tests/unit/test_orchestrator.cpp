#include <gtest/gtest.h>

#include "debate/core/validate.hpp"
#include "debate/orchestrator/battlefield.hpp"
#include "debate/orchestrator/persistence.hpp"
#include "debate/orchestrator/validity.hpp"
#include "oracles.hpp"
#include "stack.hpp"

using namespace debate;
using namespace debate::orchestrator;
using namespace debate::testing;

namespace {

const Motion kMotion = make_motion("This house would ban homework in primary schools", "homework");

struct Engine {
  std::unique_ptr<ProviderStack> stack = make_stack(provider::ProviderConfig{}, provider::RecordMode::Off, {}, 3);
  std::vector<std::string> phases;
  DebateEngine engine{config(), collab()};

  static StagePipelineConfig config() {
    StagePipelineConfig c;
    c.seed = 3;
    return c;
  }
  Collaborators collab() {
    auto c = stack->collaborators();
    c.events = [this](const std::string& phase, Stance, Stage) { phases.push_back(phase); };
    return c;
  }
};

Statement words(Stance side, Stage stage, int n) { return make_statement(side, stage, make_words(n)); }

}  // namespace

TEST(Pipeline, BudgetsAndJson) {
  StagePipelineConfig c;
  EXPECT_EQ(c.word_budget(Stage::Opening), 520);
  EXPECT_EQ(c.word_budget(Stage::Rebuttal), 520);
  EXPECT_EQ(c.word_budget(Stage::Closing), 260);
  EXPECT_DOUBLE_EQ(c.range(Stage::Closing).lower_s, 114.0);
  c.seed = 9;
  c.revision_cycles = 2;
  EXPECT_EQ(StagePipelineConfig::from_json(c.to_json()).to_json(), c.to_json());
  c.lower_fraction = 1.0;
  EXPECT_THROW(c.validate(), PreconditionError);
}

TEST(Validity, TimeLimit) {
  timing::RateEstimator e;
  EXPECT_TRUE(validate_statement(words(Stance::Pro, Stage::Closing, 200), e).valid());
  // 600 words at 130 wpm is about 277 s, far past a 120 s closing.
  const auto r = validate_statement(words(Stance::Pro, Stage::Closing, 600), e);
  EXPECT_TRUE(r.format_valid);
  EXPECT_FALSE(r.time_valid);
  EXPECT_TRUE(validate_statement(words(Stance::Pro, Stage::Opening, 500), e).valid());
}

TEST(Validity, FormatProblems) {
  timing::RateEstimator e;
  const auto check = [&](Stance side, const std::string& text) {
    return validate_statement(make_statement(side, Stage::Rebuttal, text), e).format_valid;
  };
  EXPECT_TRUE(check(Stance::Pro, "We support the motion. Homework takes time from play."));
  EXPECT_FALSE(check(Stance::Pro, "We oppose the motion because it is wrong."));
  EXPECT_FALSE(check(Stance::Con, "As the proposition we believe this."));
  EXPECT_FALSE(check(Stance::Pro, "Here is the revised statement: we support the motion."));
  EXPECT_FALSE(check(Stance::Pro, "- point one\n- point two\n- point three"));
  EXPECT_FALSE(check(Stance::Pro, "   "));
}

TEST(Battlefields, RankingTiersAndRender) {
  FlowView view(Stance::Pro);
  semantic::ExactMatcher m;
  ActionTuple a{ActionKind::Propose, Claim("A \"quoted\""), "x", std::nullopt};
  ActionTuple b{ActionKind::Propose, Claim("B"), "x", std::nullopt};
  flow::apply_statement(view, {a, b}, Stance::Pro, 0.8, m);
  auto actions = flow::candidate_actions(view.own, view.opponent, Stage::Opening);
  ASSERT_EQ(actions.size(), 3u);  // propose slot, reinforce A, reinforce B
  actions[2].retrieved.push_back(RetrievedArgument{TreeOwner::Own, 0, 0, 0, Stance::Pro, "B prepared", 0.8, 1.0});
  actions[2].k_used = 2;
  const auto fields = assemble_battlefields(actions, view);
  ASSERT_EQ(fields.size(), 3u);
  EXPECT_EQ(fields[0].actions[0].target_claim, "B");
  EXPECT_EQ(fields[0].importance, Importance::High);
  EXPECT_EQ(fields[1].importance, Importance::Medium);
  EXPECT_EQ(fields[2].importance, Importance::Low);
  const auto text = render_battlefields(fields);
  EXPECT_NE(text.find("- reinforce | target: \"B\" | prepared: \"B prepared\" (f2=0.80)"), std::string::npos);
  EXPECT_NE(text.find("target: \"A 'quoted'\" | prepared: none"), std::string::npos);
  EXPECT_NE(text.find("- propose | open slot for a new main claim"), std::string::npos);
}

TEST(Engine, FullDebateIsValidAndDeterministic) {
  Engine e1, e2;
  const auto r1 = run_debate(kMotion, e1.engine);
  const auto r2 = run_debate(kMotion, e2.engine);
  ASSERT_EQ(r1.records.size(), 6u);
  EXPECT_EQ(r1.state, r2.state);
  EXPECT_EQ(r1.records, r2.records);
  const int ks[] = {3, 2, 1, 0, 0, 0};
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& rec = r1.records[i];
    EXPECT_TRUE(rec.validity.valid()) << slot_name(rec.turn, rec.side, rec.stage);
    EXPECT_EQ(rec.k, ks[i]);
    EXPECT_EQ(rec.turn, static_cast<int>(i));
    EXPECT_FALSE(rec.feedback.empty());
  }
  for (const Stance s : {Stance::Pro, Stance::Con}) {
    EXPECT_TRUE(validate_flow_tree(r1.state.view(s).own).empty());
    EXPECT_TRUE(validate_flow_tree(r1.state.view(s).opponent).empty());
  }
  EXPECT_NE(std::find(e1.phases.begin(), e1.phases.end(), "draft"), e1.phases.end());
}

TEST(Engine, OnlyOpeningsPropose) {
  Engine e;
  const auto r = run_debate(kMotion, e.engine);
  for (const auto& rec : r.records) {
    for (const auto& f : rec.battlefields) {
      for (const auto& a : f.actions) {
        if (rec.stage != Stage::Opening) EXPECT_NE(a.kind, ActionKind::Propose);
      }
    }
  }
}

TEST(Engine, AcceptRejectsOutOfTurn) {
  Engine e;
  auto state = new_debate_state(kMotion, 3);
  EXPECT_THROW(e.engine.accept(state, words(Stance::Con, Stage::Opening, 10)), PreconditionError);
  EXPECT_THROW(e.engine.accept(state, make_statement(Stance::Pro, Stage::Opening, " ")), PreconditionError);
}

TEST(Engine, HumanStatementAccepted) {
  Engine e;
  auto state = new_debate_state(kMotion, 3, "human", "engine");
  e.engine.accept(state, make_statement(Stance::Pro, Stage::Opening,
                                        "Our claim is that Homework crowds out play; our reasoning is that "
                                        "children need unstructured time."));
  EXPECT_EQ(state.pro_view.own.root().children.size(), 1u);
  EXPECT_EQ(state.con_view.opponent.root().children.size(), 1u);
  const auto rec = e.engine.step(state);
  EXPECT_EQ(rec.side, Stance::Con);
  EXPECT_EQ(state.transcript.size(), 2u);
}

TEST(Persistence, ResumeMatchesUninterruptedRun) {
  const auto dir = scratch_dir("resume");
  {
    Engine e;
    RunOptions o;
    o.out_dir = dir / "straight";
    run_debate(kMotion, e.engine, o);
  }
  {
    Engine e;
    RunOptions o;
    o.out_dir = dir / "resumed";
    o.stop_after = 2;
    const auto partial = run_debate(kMotion, e.engine, o);
    EXPECT_EQ(partial.state.transcript.size(), 2u);
  }
  {
    Engine e;
    RunOptions o;
    o.out_dir = dir / "resumed";
    const auto rest = run_debate(kMotion, e.engine, o);
    EXPECT_TRUE(rest.resumed);
    EXPECT_EQ(rest.records.size(), 6u);
    EXPECT_THROW(run_debate(make_motion("another motion"), e.engine, o), PreconditionError);
  }
  EXPECT_EQ(snapshot(dir / "straight"), snapshot(dir / "resumed"));
  std::filesystem::remove_all(dir);
}

TEST(Persistence, LayoutAndRecords) {
  const auto dir = scratch_dir("layout");
  Engine e;
  RunOptions o;
  o.out_dir = dir;
  const auto r = run_debate(kMotion, e.engine, o);
  for (const char* f : {"state.json", "transcript.md", "statements/00_pro_opening.txt", "stages/05_con_closing.json",
                        "trees/03_pro.json", "trees/03_con.json", "trees/03.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(load_stage_records(dir), r.records);
  EXPECT_EQ(stage_record_from_json(to_json(r.records[2])), r.records[2]);
  EXPECT_EQ(read_file(dir / "statements/00_pro_opening.txt"), r.state.transcript[0].text + "\n");
  std::filesystem::remove_all(dir);
}

TEST(Persistence, PairedRunSwapsDebaters) {
  const auto dir = scratch_dir("paired");
  Engine e;
  RunOptions o;
  o.out_dir = dir;
  o.pro_debater = "engine-a";
  o.con_debater = "engine-b";
  const auto p = run_paired(kMotion, e.engine, o);
  EXPECT_EQ(p.original.state.debaters.at(Stance::Pro), "engine-a");
  EXPECT_EQ(p.swapped.state.debaters.at(Stance::Pro), "engine-b");
  EXPECT_TRUE(std::filesystem::exists(dir / "swapped" / "state.json"));
  std::filesystem::remove_all(dir);
}
