#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "debate/core/errors.hpp"
#include "debate/core/rehearsal_tree.hpp"
#include "debate/provider/chat.hpp"
#include "debate/scoring/impact.hpp"

namespace debate::rehearsal {

/// Produces arguments: main claims for a side, and replies to the last
/// argument of an exchange chain.
class ArgumentGenerator {
 public:
  virtual ~ArgumentGenerator() = default;

  virtual std::vector<Argument> main_claims(const Motion& motion, Stance stance, int n, int attempt) = 0;
  /// `chain` runs from the root claim to the argument being answered; the
  /// replies argue for `side`. At most `max_count` are used.
  virtual std::vector<Argument> replies(const Motion& motion, Stance side, const std::vector<Argument>& chain,
                                        int max_count) = 0;
};

/// Optional enrichment during expansion: evidence references for a new node.
using EvidenceHook = std::function<std::vector<std::string>(const Motion&, const Argument&)>;

/// Uses the claim-generation template. Main-claim regeneration attempts
/// shift the request seed so they are distinct requests.
class ChatArgumentGenerator : public ArgumentGenerator {
 public:
  ChatArgumentGenerator(provider::ChatProvider& chat, std::int64_t seed = 0) : chat_(chat), seed_(seed) {}

  std::vector<Argument> main_claims(const Motion& motion, Stance stance, int n, int attempt) override;
  std::vector<Argument> replies(const Motion& motion, Stance side, const std::vector<Argument>& chain,
                                int max_count) override;

  static std::string render_history(const std::vector<Argument>& chain, Stance root_side);
  /// {"arguments":[{"claim":..,"argument":..}]} -> arguments. ParseError otherwise.
  static std::vector<Argument> parse_reply(const std::string& reply);

 private:
  std::vector<Argument> ask(const Motion& motion, Stance side, int num, const std::string& history,
                            std::int64_t seed, const std::string& origin);

  provider::ChatProvider& chat_;
  std::int64_t seed_;
};

/// Test double. Replies are keyed by the text of the argument being answered;
/// unknown parents get no replies.
class ScriptedArgumentGenerator : public ArgumentGenerator {
 public:
  /// Each call to main_claims consumes the next batch.
  void add_main_claims(std::vector<Argument> batch);
  void set_replies(const std::string& parent_claim, std::vector<Argument> replies);

  std::vector<Argument> main_claims(const Motion& motion, Stance stance, int n, int attempt) override;
  std::vector<Argument> replies(const Motion& motion, Stance side, const std::vector<Argument>& chain,
                                int max_count) override;

 private:
  std::mutex mu_;
  std::deque<std::vector<Argument>> batches_;
  std::map<std::string, std::vector<Argument>> replies_;
};

/// Exactly n distinct claims. A batch with duplicates (or the wrong count) is
/// regenerated once; a second bad batch is an error.
std::vector<Argument> propose_main_claims(const Motion& motion, Stance stance, int n, ArgumentGenerator& generator);

/// Generator or scorer failure while building; carries the partial tree.
class RehearsalBuildError : public DebateError {
 public:
  RehearsalBuildError(const std::string& what, RehearsalTree partial)
      : DebateError(what), partial_(std::move(partial)) {}
  const RehearsalTree& partial() const { return partial_; }

 private:
  RehearsalTree partial_;
};

struct BuildOptions {
  TreeOwner owner = TreeOwner::Own;
  EvidenceHook evidence;
};

/// Breadth-first expansion to depth L with at most B replies per node, then
/// r_a / r_s per level and stored strengths f_0..f_{L-l} on every node.
RehearsalTree build_rehearsal_tree(const Argument& root_claim, const Motion& motion, Stance stance,
                                   const RehearsalParams& params, ArgumentGenerator& generator,
                                   scoring::ImpactScorer& scorer, const BuildOptions& options = {});

/// f_0 from the node's own scores: r_s at level 0, r_a at level 1, their mean
/// below. Throws PreconditionError when a required score is missing.
double base_strength(const RehearsalNode& node);

/// f_k computed recursively from base strengths, independent of the stored
/// values. A node without children has f_k = f_0.
double strength(const RehearsalNode& node, int k, double decay);

/// Index of the child maximizing f_{k-1}; ties within 1e-12 go to the
/// earlier child. nullopt for leaves or k == 0.
std::optional<std::size_t> best_reply(const RehearsalNode& node, int k, double decay);

/// Fills strengths[0..L-level] on every node.
void compute_strengths(RehearsalTree& tree);

struct ClaimSelection {
  std::vector<std::string> claims;
  std::string framework;
  std::string explanation;

  bool operator==(const ClaimSelection&) const = default;
};

/// Parses {"selection": {"claims": [...], "framework": "...", "explanation": "..."}}.
ClaimSelection parse_selection(const std::string& reply);

std::string render_selection_prompt(const std::vector<RehearsalTree>& candidates, const Motion& motion,
                                    Stance stance, const std::string& definition, const std::string& context);

/// Asks the selector to pick the main claims. An unparseable reply is retried
/// once with a shifted seed, then raised as ParseError.
ClaimSelection select_main_claims(const std::vector<RehearsalTree>& candidates, const Motion& motion, Stance stance,
                                  const std::string& definition, const std::string& context,
                                  provider::ChatProvider& selector, std::int64_t seed = 0);

}  // namespace debate::rehearsal
