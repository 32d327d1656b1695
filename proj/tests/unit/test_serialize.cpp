#include <gtest/gtest.h>

#include "debate/core/errors.hpp"
#include "debate/core/serialize.hpp"
#include "debate/flow/flow.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "oracles.hpp"

using namespace debate;
using namespace debate::testing;

namespace {

FlowView random_view(std::mt19937_64& rng, int length) {
  semantic::ExactMatcher matcher;
  FlowView view(Stance::Pro);
  int turn = 0;
  for (const auto& s : random_tuple_sequence(rng, length)) {
    flow::apply_statement(view, {s.tuple}, s.speaker, 0.8, matcher, TurnStamp{Stage::Opening, turn++});
  }
  return view;
}

}  // namespace

TEST(Serialize, FlowTreeRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const auto view = random_view(rng, 30);
    const auto text = doc::serialize(view.opponent);
    const auto back = doc::parse_flow_tree(text);
    EXPECT_EQ(back, view.opponent);
    EXPECT_EQ(doc::serialize(back), text);
  }
}

TEST(Serialize, RehearsalTreeRoundTrip) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    auto tree = random_rehearsal_tree(rng, RehearsalParams{3, 3, 0.8});
    rehearsal::compute_strengths(tree);
    const auto text = doc::serialize(tree);
    EXPECT_EQ(doc::parse_rehearsal_tree(text), tree);
  }
}

TEST(Serialize, StateRoundTrip) {
  std::mt19937_64 rng(13);
  auto s = new_debate_state(make_motion("Cities should ban cars", "cars"), 42, "alice", "engine");
  s.pro_view = random_view(rng, 20);
  s.transcript.push_back(make_statement(Stance::Pro, Stage::Opening, "We support the motion.", "plan text"));
  s.transcript.back().estimated_duration = 1.5;
  s.pro_prep.definition = "a ban on private cars";
  s.pro_prep.main_claims = {Claim("cleaner air")};
  s.pro_prep.claims_selected = true;
  auto tree = random_rehearsal_tree(rng, RehearsalParams{2, 2, 0.8});
  rehearsal::compute_strengths(tree);
  s.pro_prep.forest.own.push_back(tree);
  s.pro_prep.forest_ready = true;
  const auto text = doc::serialize(s);
  const auto back = doc::parse_debate_state(text);
  EXPECT_EQ(back, s);
  EXPECT_EQ(doc::serialize(back), text);
}

TEST(Serialize, KeysAreSortedAndOptionalsOmitted) {
  DebateFlowTree t(Stance::Pro);
  t.add_child(DebateFlowTree::kRootId, Claim("a"), {}, Stance::Pro, std::nullopt);
  const auto j = doc::parse_json(doc::serialize(t));
  EXPECT_EQ(j.at("kind"), "flow_tree");
  EXPECT_EQ(j.at("schema_version"), doc::kSchemaVersion);
  const auto& node = j.at("value").at("root").at("children").at(0);
  EXPECT_FALSE(node.contains("created_at"));
  const auto text = doc::serialize(t);
  EXPECT_LT(text.find("\"kind\""), text.find("\"schema_version\""));
}

TEST(Serialize, RejectsBadDocuments) {
  DebateFlowTree t(Stance::Con);
  const int a = t.add_child(DebateFlowTree::kRootId, Claim("a"), {}, Stance::Con, std::nullopt);
  t.add_child(a, Claim("b"), {}, Stance::Pro, std::nullopt);
  const auto good = doc::parse_json(doc::serialize(t));

  auto wrong_version = good;
  wrong_version["schema_version"] = 2;
  EXPECT_THROW(doc::parse_flow_tree(wrong_version.dump()), ParseError);

  auto wrong_kind = good;
  wrong_kind["kind"] = "rehearsal_tree";
  EXPECT_THROW(doc::parse_flow_tree(wrong_kind.dump()), ParseError);

  auto missing = good;
  missing["value"]["root"]["children"][0].erase("visits");
  EXPECT_THROW(doc::parse_flow_tree(missing.dump()), ParseError);

  auto bad_enum = good;
  bad_enum["value"]["root"]["children"][0]["status"] = "refuted";
  EXPECT_THROW(doc::parse_flow_tree(bad_enum.dump()), ParseError);

  auto shared = good;
  shared["value"]["root"]["children"].push_back(shared["value"]["root"]["children"][0]);
  EXPECT_THROW(doc::parse_flow_tree(shared.dump()), ParseError);

  EXPECT_THROW(doc::parse_flow_tree("{not json"), ParseError);
}
