#include <gtest/gtest.h>

#include <fstream>

#include "debate/core/validate.hpp"
#include "debate/corpus/corpus.hpp"
#include "debate/provider/simulated.hpp"
#include "oracles.hpp"
#include "stack.hpp"

using namespace debate;
using namespace debate::corpus;
using namespace debate::testing;

namespace {

struct Ingest {
  provider::SimulatedChatProvider chat;
  flow::ChatActionExtractor extractor{chat};
  provider::TokenHashEmbedder embedder{256};
  semantic::EmbeddingMatcher matcher{embedder};
};

}  // namespace

TEST(Transcript, ParsesHeadingVariants) {
  const auto t = parse_transcript(read_fixture("transcripts/remote_work.txt"), "remote");
  EXPECT_EQ(t.motion.text, "Remote work should be the default for office jobs");
  ASSERT_EQ(t.statements.size(), 6u);
  EXPECT_EQ(t.statements[1].side, Stance::Con);
  EXPECT_EQ(t.statements[2].stage, Stage::Rebuttal);
  EXPECT_EQ(t.statements[5].text.rfind("We reinforce", 0), 0u);

  const auto u = parse_transcript(read_fixture("transcripts/school_uniforms.md"), "uniforms");
  EXPECT_EQ(u.motion.text, "Schools should require uniforms");
  EXPECT_EQ(u.statements.size(), 6u);
}

TEST(Transcript, IncompleteIsSegmentationError) {
  EXPECT_THROW(parse_transcript(read_fixture("transcripts/broken.txt"), "broken"), SegmentationError);
  EXPECT_THROW(parse_transcript("no headings at all", "x"), SegmentationError);
}

TEST(Ingest, BuildsValidTrees) {
  Ingest in;
  const auto entry = ingest_debate(parse_transcript(read_fixture("transcripts/remote_work.txt"), "remote"),
                                   in.extractor, in.matcher, in.embedder);
  EXPECT_TRUE(validate_flow_tree(entry.pro_tree).empty());
  EXPECT_TRUE(validate_flow_tree(entry.con_tree).empty());
  EXPECT_EQ(entry.pro_tree.root().children.size(), 2u);
  EXPECT_EQ(entry.tree_string, semantic::debate_to_string(entry.pro_tree, entry.con_tree));
  EXPECT_EQ(entry.embedding.dimension(), 256u);
  // The opposition's rebut lands under the proposition's rebuttal of its attack.
  EXPECT_NE(entry.tree_string.find("Few firms actually invest"), std::string::npos);
}

TEST(Ingest, DirectorySkipsBrokenTranscripts) {
  Ingest in;
  IngestReport report;
  const auto index =
      ingest_directory(fixture_path("transcripts"), in.extractor, in.matcher, in.embedder, report);
  EXPECT_EQ(index.size(), 2u);
  EXPECT_EQ(report.ingested.size(), 2u);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_EQ(report.skipped[0].first, "broken");
}

TEST(Index, SaveLoadAndCorruption) {
  Ingest in;
  IngestReport report;
  const auto index = ingest_directory(fixture_path("transcripts"), in.extractor, in.matcher, in.embedder, report);
  const auto dir = scratch_dir("corpus_index");
  index.save(dir / "index.json");
  EXPECT_EQ(CorpusIndex::load(dir / "index.json"), index);

  {
    std::ofstream out(dir / "bad.json");
    out << index.to_document().substr(0, 200);
  }
  EXPECT_THROW(CorpusIndex::load(dir / "bad.json"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST(Index, RejectsForeignEmbeddings) {
  CorpusIndex index("token-hash", 256);
  CorpusEntry e;
  e.id = "x";
  e.embedding = provider::HashEmbedder(256).embed("x");
  EXPECT_THROW(index.add(e), PreconditionError);
}

TEST(Retrieval, TopHitAndThreshold) {
  Ingest in;
  IngestReport report;
  const auto index = ingest_directory(fixture_path("transcripts"), in.extractor, in.matcher, in.embedder, report);
  const auto& target = index.entries()[0];
  const auto hit = retrieve_human_tree(target.pro_tree, target.con_tree, index, 0.8, in.embedder);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->entry->id, target.id);
  EXPECT_NEAR(hit->similarity, 1.0, 1e-9);
  EXPECT_FALSE(retrieve_human_tree("[pro][proposed][0] ROOT\n", index, 0.99, in.embedder));
}

TEST(Retrieval, MotionOverlap) {
  Ingest in;
  IngestReport report;
  const auto index = ingest_directory(fixture_path("transcripts"), in.extractor, in.matcher, in.embedder, report);
  const auto hits = motion_overlap(index, make_motion("Schools should require uniforms"));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_DOUBLE_EQ(hits[0].token_jaccard, 1.0);
}
