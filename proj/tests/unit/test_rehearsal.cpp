#include <gtest/gtest.h>

#include "debate/core/validate.hpp"
#include "debate/provider/simulated.hpp"
#include "debate/rehearsal/outline.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "oracles.hpp"

using namespace debate;
using namespace debate::testing;

namespace {

Argument arg(const std::string& claim) {
  Argument a;
  a.claim.text = claim;
  return a;
}

RehearsalTree golden_tree() {
  const auto lines = rehearsal::parse_outline(read_fixture("golden_outline.txt"));
  const auto motion = make_motion("This house would abolish the debt ceiling");
  rehearsal::ScriptedArgumentGenerator generator;
  scoring::TableImpactScorer table;
  const auto root = script_outline(lines, motion, Stance::Pro, generator, table);
  return rehearsal::build_rehearsal_tree(root, motion, Stance::Pro, RehearsalParams{}, generator, table);
}

}  // namespace

TEST(Rehearsal, GoldenTreeExactValues) {
  // Worked by hand from the listed scores with gamma = 0.8:
  //   leaves (0.8+0.8)/2, (1.0+0.8)/2, (1.2+1.0)/2 = 0.8, 0.9, 1.1
  //   level 2: 1.5 - 0.8 * 1.1 = 0.62
  //   level 1: 1.3 - 0.8 * 0.62 = 0.804
  //   root:    1.6 - 0.8 * 0.804 = 0.9568
  const auto tree = golden_tree();
  EXPECT_NEAR(tree.root.strengths.at(3), 0.9568, 1e-12);
  const auto& l1 = tree.root.children.at(0);
  EXPECT_NEAR(l1.strengths.at(2), 0.804, 1e-12);
  const auto& l2 = l1.children.at(0);
  EXPECT_NEAR(l2.strengths.at(1), 0.62, 1e-12);
  ASSERT_EQ(l2.children.size(), 3u);
  EXPECT_NEAR(l2.children[0].strengths.at(0), 0.8, 1e-12);
  EXPECT_NEAR(l2.children[1].strengths.at(0), 0.9, 1e-12);
  EXPECT_NEAR(l2.children[2].strengths.at(0), 1.1, 1e-12);
  EXPECT_TRUE(validate_rehearsal_tree(tree).empty());
}

TEST(Rehearsal, GoldenMatchesDisplayedValues) {
  const auto lines = rehearsal::parse_outline(read_fixture("golden_outline.txt"));
  const auto tree = golden_tree();
  std::vector<double> computed;
  for_each_node(tree.root, [&](const RehearsalNode& n) { computed.push_back(n.strengths.back()); });
  ASSERT_EQ(computed.size(), lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_NEAR(computed[i], lines[i].strength, 0.1) << "line " << i;
}

TEST(Rehearsal, RecursiveMatchesExhaustive) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    RehearsalParams params{3, 4, 0.8};
    auto tree = random_rehearsal_tree(rng, params);
    rehearsal::compute_strengths(tree);
    for_each_node(tree.root, [&](const RehearsalNode& n) {
      for (int k = 0; k <= params.max_depth - n.level; ++k) {
        EXPECT_NEAR(rehearsal::strength(n, k, params.decay), exhaustive_strength(n, k, params.decay), 1e-9);
        EXPECT_NEAR(n.strengths.at(static_cast<std::size_t>(k)), exhaustive_strength(n, k, params.decay), 1e-9);
      }
    });
  }
}

TEST(Rehearsal, LeafStrengthIsBase) {
  RehearsalNode leaf;
  leaf.level = 2;
  leaf.attack_score = 1.0;
  leaf.support_score = 0.4;
  EXPECT_DOUBLE_EQ(rehearsal::base_strength(leaf), 0.7);
  EXPECT_DOUBLE_EQ(rehearsal::strength(leaf, 3, 0.8), 0.7);
  EXPECT_FALSE(rehearsal::best_reply(leaf, 2, 0.8).has_value());
}

TEST(Rehearsal, MissingScoreIsAnError) {
  RehearsalNode n;
  n.level = 1;
  EXPECT_THROW(rehearsal::base_strength(n), PreconditionError);
  EXPECT_THROW(rehearsal::strength(n, -1, 0.8), PreconditionError);
}

TEST(Rehearsal, BestReplyTieGoesToEarlierChild) {
  RehearsalNode root;
  root.support_score = 1.0;
  for (int i = 0; i < 3; ++i) {
    RehearsalNode c;
    c.id = i + 1;
    c.level = 1;
    c.attack_score = i == 0 ? 0.5 : 1.5;
    root.children.push_back(c);
  }
  EXPECT_EQ(rehearsal::best_reply(root, 1, 0.8), std::optional<std::size_t>(1));
  EXPECT_FALSE(rehearsal::best_reply(root, 0, 0.8).has_value());
}

TEST(Rehearsal, ParamsValidate) {
  EXPECT_NO_THROW((RehearsalParams{3, 3, 0.8}).validate());
  EXPECT_THROW((RehearsalParams{0, 3, 0.8}).validate(), PreconditionError);
  EXPECT_THROW((RehearsalParams{3, -1, 0.8}).validate(), PreconditionError);
  EXPECT_THROW((RehearsalParams{3, 3, 1.5}).validate(), PreconditionError);
}

TEST(Rehearsal, TooManyRepliesFailsWithPartialTree) {
  rehearsal::ScriptedArgumentGenerator gen;
  gen.set_replies("root", {arg("a"), arg("b"), arg("c")});
  scoring::StubImpactScorer scorer(1);
  try {
    rehearsal::build_rehearsal_tree(arg("root"), make_motion("m"), Stance::Pro, RehearsalParams{2, 2, 0.8}, gen,
                                    scorer);
    FAIL() << "expected RehearsalBuildError";
  } catch (const rehearsal::RehearsalBuildError& e) {
    EXPECT_EQ(e.partial().root.claim_text(), "root");
  }
}

TEST(Rehearsal, ScorerFailureCarriesPartialTree) {
  rehearsal::ScriptedArgumentGenerator gen;
  gen.set_replies("root", {arg("a"), arg("b")});
  scoring::TableImpactScorer empty;
  EXPECT_THROW(rehearsal::build_rehearsal_tree(arg("root"), make_motion("m"), Stance::Con, RehearsalParams{}, gen,
                                               empty),
               rehearsal::RehearsalBuildError);
}

TEST(Rehearsal, DepthZeroTreeIsJustTheRoot) {
  rehearsal::ScriptedArgumentGenerator gen;
  gen.set_replies("root", {arg("a")});
  scoring::StubImpactScorer scorer(2);
  const auto t = rehearsal::build_rehearsal_tree(arg("root"), make_motion("m"), Stance::Pro,
                                                 RehearsalParams{3, 0, 0.8}, gen, scorer);
  EXPECT_TRUE(t.root.children.empty());
  EXPECT_EQ(t.root.strengths.size(), 1u);
}

TEST(Rehearsal, MainClaimsRegenerateOnce) {
  rehearsal::ScriptedArgumentGenerator gen;
  gen.add_main_claims({arg("x"), arg("x")});
  gen.add_main_claims({arg("x"), arg("y")});
  const auto claims = rehearsal::propose_main_claims(make_motion("m"), Stance::Pro, 2, gen);
  EXPECT_EQ(claims[1].claim.text, "y");

  rehearsal::ScriptedArgumentGenerator bad;
  bad.add_main_claims({arg("x")});
  bad.add_main_claims({arg("y")});
  EXPECT_THROW(rehearsal::propose_main_claims(make_motion("m"), Stance::Pro, 2, bad), DebateError);
}

TEST(Rehearsal, SimulatedBuildRespectsBounds) {
  provider::SimulatedChatProvider chat;
  rehearsal::ChatArgumentGenerator gen(chat, 3);
  scoring::PromptImpactScorer scorer(chat);
  const auto motion = make_motion("This house would ban homework");
  const auto claims = rehearsal::propose_main_claims(motion, Stance::Con, 5, gen);
  ASSERT_EQ(claims.size(), 5u);
  const auto tree = rehearsal::build_rehearsal_tree(claims[0], motion, Stance::Con, RehearsalParams{2, 3, 0.8}, gen,
                                                    scorer);
  EXPECT_TRUE(validate_rehearsal_tree(tree).empty());
  int nodes = 0;
  for_each_node(tree.root, [&](const RehearsalNode& n) {
    ++nodes;
    EXPECT_LE(n.children.size(), 2u);
    EXPECT_LE(n.level, 3);
  });
  EXPECT_GT(nodes, 1);
}

TEST(Rehearsal, ParseGeneratorReply) {
  const auto args = rehearsal::ChatArgumentGenerator::parse_reply(
      "Here you go:\n```json\n{\"arguments\":[{\"claim\":\"A\",\"argument\":\"because\"}]}\n```");
  ASSERT_EQ(args.size(), 1u);
  EXPECT_EQ(args[0].claim.text, "A");
  EXPECT_EQ(args[0].support_text, "because");
  EXPECT_THROW(rehearsal::ChatArgumentGenerator::parse_reply("no json here"), ParseError);
}

TEST(Rehearsal, ParseSelection) {
  const auto s = rehearsal::parse_selection(
      R"({"selection":{"claims":["a","b"],"framework":"net benefit","explanation":"why"}})");
  EXPECT_EQ(s.claims, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.framework, "net benefit");
  EXPECT_THROW(rehearsal::parse_selection(R"({"selection":{"framework":"x"}})"), ParseError);
}

TEST(Outline, RenderParseRoundTrip) {
  const auto tree = golden_tree();
  const auto text = rehearsal::render_outline(tree);
  const auto lines = rehearsal::parse_outline(text);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0].level, 0);
  EXPECT_DOUBLE_EQ(lines[0].strength, 1.0);  // 0.9568 shown to one decimal
  EXPECT_DOUBLE_EQ(lines[1].attack_score.value(), 1.3);
  EXPECT_FALSE(lines[1].support_score.has_value());
  EXPECT_EQ(lines[3].level, 3);
  EXPECT_DOUBLE_EQ(lines[5].strength, 1.1);
  EXPECT_NE(text.find("Level-2 Your Rebuttal"), std::string::npos);
}

TEST(Outline, RejectsGarbage) { EXPECT_THROW(rehearsal::parse_outline("Level-x nonsense"), ParseError); }
