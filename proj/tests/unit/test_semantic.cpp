#include <gtest/gtest.h>

#include "debate/core/errors.hpp"
#include "debate/provider/embed.hpp"
#include "debate/semantic/semantic.hpp"

using namespace debate;
using namespace debate::semantic;
using provider::EmbeddingVector;

TEST(Cosine, KnownValues) {
  EXPECT_DOUBLE_EQ(cosine_similarity({{1, 0}, "m"}, {{0, 1}, "m"}), 0.0);
  EXPECT_NEAR(cosine_similarity({{1, 1}, "m"}, {{2, 2}, "m"}), 1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity({{1, 0}, "m"}, {{-1, 0}, "m"}), -1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity({{3, 4}, "m"}, {{4, 3}, "m"}), 24.0 / 25.0, 1e-12);
}

TEST(Cosine, Mismatches) {
  EXPECT_THROW(cosine_similarity({{1, 0}, "m"}, {{1, 0, 0}, "m"}), PreconditionError);
  EXPECT_THROW(cosine_similarity({{1, 0}, "m"}, {{1, 0}, "other"}), PreconditionError);
  EXPECT_THROW(cosine_similarity({{0, 0}, "m"}, {{1, 0}, "m"}), PreconditionError);
}

TEST(Threshold, Range) {
  EXPECT_NO_THROW(validate_threshold(0.8));
  EXPECT_NO_THROW(validate_threshold(1.0));
  EXPECT_THROW(validate_threshold(0.0), PreconditionError);
  EXPECT_THROW(validate_threshold(1.2), PreconditionError);
}

TEST(Embedders, HashAndTokenHash) {
  provider::HashEmbedder h(32);
  EXPECT_EQ(h.embed("abc"), h.embed("abc"));
  EXPECT_EQ(h.embed("abc").dimension(), 32u);
  provider::TokenHashEmbedder t(256);
  EmbeddingMatcher m(t);
  EXPECT_NEAR(m.similarity("Uniforms reduce bullying", "Uniforms reduce bullying"), 1.0, 1e-12);
  const double close = m.similarity("School uniforms reduce bullying", "Uniforms reduce bullying in schools");
  const double far = m.similarity("School uniforms reduce bullying", "Carbon taxes lower emissions");
  EXPECT_GT(close, far);
}

TEST(Embedders, CacheCountsInnerCalls) {
  provider::HashEmbedder h(16);
  provider::CachingEmbedder c(h);
  c.embed("a");
  c.embed("a");
  c.embed("b");
  EXPECT_EQ(c.inner_calls(), 2u);
  EXPECT_EQ(c.cache_size(), 2u);
}

TEST(FindSimilar, ThresholdFilterAndTies) {
  DebateFlowTree t(Stance::Pro);
  const int a = t.add_child(DebateFlowTree::kRootId, Claim("same"), {}, Stance::Pro, std::nullopt);
  const int b = t.add_child(a, Claim("other"), {}, Stance::Con, std::nullopt);
  t.add_child(b, Claim("same"), {}, Stance::Pro, std::nullopt);
  ExactMatcher m;
  const auto first = find_similar_node(t, "same", 0.8, m);
  ASSERT_TRUE(first);
  EXPECT_EQ(first->node_id, a);
  EXPECT_FALSE(find_similar_node(t, "missing", 0.8, m));
  const auto con_only = find_similar_node(t, "other", 0.8, m, [](const FlowNode& n) { return n.side == Stance::Pro; });
  EXPECT_FALSE(con_only);
  EXPECT_FALSE(find_similar_node(t, DebateFlowTree::kRootText, 0.8, m));
}

TEST(TreeString, FormatAndRoundTrip) {
  DebateFlowTree t(Stance::Con);
  const int a = t.add_child(DebateFlowTree::kRootId, Claim("line one\nline two \\ end"), {}, Stance::Con,
                            std::nullopt);
  t.add_child(a, Claim("reply"), {}, Stance::Pro, std::nullopt);
  const auto s = flow_tree_to_string(t);
  EXPECT_EQ(s, "[con][proposed][0] ROOT\n  [con][proposed][0] line one\\nline two \\\\ end\n"
               "    [pro][proposed][0] reply\n");
  EXPECT_EQ(parse_tree_string(s), tree_lines(t));
  EXPECT_THROW(parse_tree_string(" [pro][proposed][0] x"), ParseError);
  EXPECT_THROW(parse_tree_string("[pro][sleeping][0] x"), ParseError);
}
