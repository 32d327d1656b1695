#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "debate/core/flow_tree.hpp"
#include "debate/core/rehearsal_tree.hpp"
#include "debate/rehearsal/outline.hpp"
#include "debate/rehearsal/rehearsal.hpp"
#include "debate/scoring/impact.hpp"
#include "debate/timing/timing.hpp"

namespace debate::testing {

std::filesystem::path fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

/// f_0 straight from the scoring rule, written independently of the library.
double oracle_base(const RehearsalNode& node);

/// f_k by brute force: enumerate every path of at most k replies below the
/// node, score each path as sum_i (-gamma)^i f_0(node_i), and resolve the
/// choices by backward induction over the enumerated paths (the speaker of
/// the node maximizes at even depths, the opponent minimizes at odd ones).
double exhaustive_strength(const RehearsalNode& node, int k, double gamma);

/// Tree with up to B children per node and depth up to L, random scores in
/// [0, 2] on the fields each level requires.
RehearsalTree random_rehearsal_tree(std::mt19937_64& rng, const RehearsalParams& params);

/// Rebuilds a tree from outline lines using the listed scores.
RehearsalTree tree_from_outline(const std::vector<rehearsal::OutlineLine>& lines, const RehearsalParams& params);

/// Scripts a generator and a score table so that build_rehearsal_tree
/// reproduces the outline: replies keyed by parent claim, and one table row
/// per (context, parent, child, relation) query the builder will ask with
/// the outline's listed scores. Returns the root argument.
Argument script_outline(const std::vector<rehearsal::OutlineLine>& lines, const Motion& motion, Stance stance,
                        rehearsal::ScriptedArgumentGenerator& generator, scoring::TableImpactScorer& table);

/// A spoken tuple with its speaker, for flow-tree property runs.
struct SpokenTuple {
  Stance speaker = Stance::Pro;
  ActionTuple tuple;
};

/// Random sequence over unique claim texts. Targets mostly name existing
/// claims (of either side, so some miss the side filter) and sometimes
/// nothing at all.
std::vector<SpokenTuple> random_tuple_sequence(std::mt19937_64& rng, int length);

/// Independent model of the update rule for exact-text matching: the number
/// of non-Propose tuples that find a target on the allowed side.
int expected_matched(const std::vector<SpokenTuple>& sequence);

/// Any violations of: child side differs from parent side, Attacked iff the
/// node has children, visits >= 0. Empty when the tree is well formed.
std::vector<std::string> structural_problems(const DebateFlowTree& tree);

int total_visits(const DebateFlowTree& tree);

/// Reviser returning exactly `budget` words.
class ExactReviser : public timing::Reviser {
 public:
  std::string revise(const std::string& statement, int word_budget) override;
  int calls = 0;
};

/// Reviser that ignores the budget.
class ConstantReviser : public timing::Reviser {
 public:
  explicit ConstantReviser(std::string text) : text_(std::move(text)) {}
  std::string revise(const std::string&, int) override {
    ++calls;
    return text_;
  }
  int calls = 0;

 private:
  std::string text_;
};

/// `n` words of filler in sentences of `per_sentence` words.
std::string make_words(int n, int per_sentence = 8);

}  // namespace debate::testing
