#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "debate/core/errors.hpp"
#include "debate/core/flow_tree.hpp"
#include "debate/flow/flow.hpp"
#include "debate/provider/embed.hpp"
#include "debate/semantic/semantic.hpp"

namespace debate::corpus {

/// Transcript could not be cut into the six Oxford statements.
class SegmentationError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct RawTranscript {
  std::string id;
  Motion motion;
  /// Oxford order, one per schedule slot.
  std::vector<Statement> statements;
};

/// Transcript document:
///   Motion: <text>            (or "# Motion: <text>")
///   ## Pro Opening
///   <speech>
///   ## Con Opening
///   ...
/// Any '#' heading naming one side word (pro, proposition, for, affirmative,
/// government / con, opposition, against, negative) and one stage word
/// (opening, constructive / rebuttal / closing, summary) starts a segment.
RawTranscript parse_transcript(std::string_view text, std::string id);

struct CorpusEntry {
  std::string id;
  std::string motion;
  std::vector<Statement> statements;
  DebateFlowTree pro_tree{Stance::Pro};
  DebateFlowTree con_tree{Stance::Con};
  std::string tree_string;
  provider::EmbeddingVector embedding;

  bool operator==(const CorpusEntry&) const = default;
};

struct IngestOptions {
  double theta = semantic::kDefaultThreshold;
};

/// Extracts tuples statement by statement, grows both trees, validates them,
/// renders and embeds the tree string.
CorpusEntry ingest_debate(const RawTranscript& transcript, flow::ActionExtractor& extractor,
                          semantic::ClaimMatcher& matcher, provider::Embedder& embedder,
                          const IngestOptions& options = {});

struct IngestReport {
  std::vector<std::string> ingested;
  std::vector<std::pair<std::string, std::string>> skipped;  // (id, reason)
};

inline constexpr int kIndexVersion = 1;

class CorpusIndex {
 public:
  CorpusIndex(std::string model_tag, std::size_t dimension);

  /// Rejects embeddings whose model tag or dimension differ from the index,
  /// and duplicate ids.
  void add(CorpusEntry entry);

  const std::string& model_tag() const { return model_tag_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<CorpusEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::string to_document() const;
  static CorpusIndex from_document(std::string_view text);
  void save(const std::filesystem::path& path) const;
  /// Throws ParseError on a corrupt file or a version mismatch; never
  /// returns a partial index.
  static CorpusIndex load(const std::filesystem::path& path);

  bool operator==(const CorpusIndex&) const = default;

 private:
  std::string model_tag_;
  std::size_t dimension_;
  std::vector<CorpusEntry> entries_;
};

CorpusIndex build_index(std::vector<CorpusEntry> entries, const std::string& model_tag, std::size_t dimension);

/// Ingests every *.txt / *.md transcript in `dir` (sorted by name). Failures
/// are skipped and reported.
CorpusIndex ingest_directory(const std::filesystem::path& dir, flow::ActionExtractor& extractor,
                             semantic::ClaimMatcher& matcher, provider::Embedder& embedder, IngestReport& report,
                             const IngestOptions& options = {});

struct RetrievalHit {
  const CorpusEntry* entry = nullptr;
  double similarity = 0.0;
};

/// Top-1 entry by cosine of tree-string embeddings, if it reaches theta.
std::optional<RetrievalHit> retrieve_human_tree(std::string_view tree_string, const CorpusIndex& index, double theta,
                                                provider::Embedder& embedder);
std::optional<RetrievalHit> retrieve_human_tree(const DebateFlowTree& pro, const DebateFlowTree& con,
                                                const CorpusIndex& index, double theta, provider::Embedder& embedder);

struct MotionOverlap {
  std::string id;
  std::string motion;
  double token_jaccard = 0.0;
};

/// Corpus motions sharing at least `min_jaccard` of their lowercase word set
/// with `motion`. Informational only.
std::vector<MotionOverlap> motion_overlap(const CorpusIndex& index, const Motion& motion, double min_jaccard = 0.5);

}  // namespace debate::corpus
