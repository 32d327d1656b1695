#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "debate/core/errors.hpp"
#include "debate/core/types.hpp"
#include "debate/provider/chat.hpp"

namespace debate::scoring {

enum class ImpactClass { NotImpactful = 0, MediumImpactful = 1, Impactful = 2 };

struct ImpactDistribution {
  std::map<ImpactClass, double> probs;

  /// Throws PreconditionError on negative entries or a sum off 1 by > 1e-9.
  void validate() const;
  static ImpactDistribution point_mass(ImpactClass c);
};

/// Sum of class value times probability, in [0, 2].
double weighted_score(const ImpactDistribution& dist);

enum class Relation { Support, Attack };

std::string_view to_string(Relation r);
Relation parse_relation(std::string_view s);

struct ImpactQuery {
  std::vector<std::string> context;  // ancestors above `parent`, root first
  std::string parent;
  std::string child;
  Relation relation = Relation::Support;

  bool operator==(const ImpactQuery&) const = default;
};

/// Compact sorted-key JSON of the query; the score-table key is its sha256.
std::string canonical_query(const ImpactQuery& q);
std::string query_key(const ImpactQuery& q);

/// The proposition a root claim is scored against: the side's position on
/// the motion.
std::string stance_proposition(const Motion& motion, Stance stance);

class ScoringError : public DebateError {
 public:
  ScoringError(const std::string& what, ImpactQuery query)
      : DebateError(what + " [query " + canonical_query(query) + "]"), query_(std::move(query)) {}
  const ImpactQuery& query() const { return query_; }

 private:
  ImpactQuery query_;
};

class ImpactScorer {
 public:
  virtual ~ImpactScorer() = default;
  virtual double score(const ImpactQuery& query) = 0;
  virtual std::string tag() const = 0;
};

/// Validates the query, runs the scorer, clamps into [0, 2]. Any failure is
/// rethrown as ScoringError carrying the query.
double score_impact(const ImpactQuery& query, ImpactScorer& scorer);

/// Deterministic offline scorer: a pseudo-random distribution derived from
/// sha256(seed, canonical query), reduced by weighted_score.
class StubImpactScorer : public ImpactScorer {
 public:
  explicit StubImpactScorer(std::uint64_t seed = 0) : seed_(seed) {}

  double score(const ImpactQuery& query) override;
  std::string tag() const override { return "stub:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

/// Scores looked up from a table of (query key, relation, score) rows.
/// Unknown queries are an error.
class TableImpactScorer : public ImpactScorer {
 public:
  TableImpactScorer() = default;

  /// Tab-separated rows "key<TAB>relation<TAB>score"; '#' lines are comments.
  static TableImpactScorer load(const std::filesystem::path& path);
  static TableImpactScorer parse(std::string_view tsv);

  void add(const ImpactQuery& query, double score);
  double score(const ImpactQuery& query) override;
  std::string tag() const override { return "table"; }
  std::size_t size() const { return rows_.size(); }

  /// Serializes back to the TSV format, rows sorted by key.
  std::string to_tsv() const;

 private:
  struct Row {
    Relation relation;
    double score;
  };
  std::unordered_map<std::string, Row> rows_;
};

/// Asks a chat model for the class token using the reward-model instruction
/// format. With first-token probabilities the full distribution is used;
/// otherwise a point mass on the returned digit.
class PromptImpactScorer : public ImpactScorer {
 public:
  explicit PromptImpactScorer(provider::ChatProvider& chat) : chat_(chat) {}

  double score(const ImpactQuery& query) override;
  std::string tag() const override { return "prompt:" + chat_.tag(); }

  static std::string render_prompt(const ImpactQuery& query);
  /// Reply (and optional token probabilities) to a distribution. Throws
  /// ParseError outside the 3-class vocabulary.
  static ImpactDistribution parse_reply(const provider::ChatReply& reply);

 private:
  provider::ChatProvider& chat_;
};

}  // namespace debate::scoring
