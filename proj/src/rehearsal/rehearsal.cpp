#include "debate/rehearsal/rehearsal.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "debate/prompts/prompts.hpp"
#include "debate/rehearsal/outline.hpp"
#include "debate/util/text.hpp"

namespace debate::rehearsal {

using Json = nlohmann::json;

std::string ChatArgumentGenerator::render_history(const std::vector<Argument>& chain, Stance root_side) {
  if (chain.empty()) return "(no exchanges yet)";
  std::string out;
  Stance side = root_side;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out += "- [" + std::string(to_string(side)) + "] " + chain[i].claim.text;
    if (!chain[i].support_text.empty()) out += ": " + chain[i].support_text;
    out += '\n';
    side = opposite(side);
  }
  return out;
}

std::vector<Argument> ChatArgumentGenerator::parse_reply(const std::string& reply) {
  std::vector<Argument> out;
  try {
    const auto j = Json::parse(prompts::extract_json_object(reply));
    for (const auto& a : j.at("arguments")) {
      Argument arg;
      arg.claim.text = std::string(text::trim(a.at("claim").get<std::string>()));
      arg.support_text = a.value("argument", "");
      if (arg.claim.text.empty()) throw ParseError("empty claim in generator reply");
      out.push_back(std::move(arg));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("generator reply: ") + e.what());
  }
  return out;
}

std::vector<Argument> ChatArgumentGenerator::ask(const Motion& motion, Stance side, int num,
                                                 const std::string& history, std::int64_t seed,
                                                 const std::string& origin) {
  const auto prompt = prompts::render_named("generate_claims", {{"motion", motion.text},
                                                                {"act", std::string(act_verb(side))},
                                                                {"num", std::to_string(num)},
                                                                {"history", history}});
  for (int attempt = 0;; ++attempt) {
    provider::ChatRequest req;
    req.prompt = prompt;
    req.seed = seed + attempt;
    req.origin = origin;
    try {
      return parse_reply(chat_.chat(req));
    } catch (const ParseError&) {
      if (attempt >= 1) throw;
    }
  }
}

std::vector<Argument> ChatArgumentGenerator::main_claims(const Motion& motion, Stance stance, int n, int attempt) {
  return ask(motion, stance, n, render_history({}, stance), seed_ + 1000 * attempt, "rehearsal/main-claims");
}

std::vector<Argument> ChatArgumentGenerator::replies(const Motion& motion, Stance side,
                                                     const std::vector<Argument>& chain, int max_count) {
  const Stance root_side = chain.size() % 2 == 1 ? opposite(side) : side;
  auto out = ask(motion, side, max_count, render_history(chain, root_side), seed_, "rehearsal/expand");
  if (static_cast<int>(out.size()) > max_count) out.resize(max_count);
  return out;
}

void ScriptedArgumentGenerator::add_main_claims(std::vector<Argument> batch) {
  std::lock_guard lock(mu_);
  batches_.push_back(std::move(batch));
}

void ScriptedArgumentGenerator::set_replies(const std::string& parent_claim, std::vector<Argument> replies) {
  std::lock_guard lock(mu_);
  replies_[parent_claim] = std::move(replies);
}

std::vector<Argument> ScriptedArgumentGenerator::main_claims(const Motion&, Stance, int, int) {
  std::lock_guard lock(mu_);
  if (batches_.empty()) throw DebateError("scripted generator has no main-claim batch left");
  auto b = std::move(batches_.front());
  batches_.pop_front();
  return b;
}

std::vector<Argument> ScriptedArgumentGenerator::replies(const Motion&, Stance, const std::vector<Argument>& chain,
                                                         int) {
  std::lock_guard lock(mu_);
  if (chain.empty()) return {};
  const auto it = replies_.find(chain.back().claim.text);
  return it == replies_.end() ? std::vector<Argument>{} : it->second;
}

std::vector<Argument> propose_main_claims(const Motion& motion, Stance stance, int n, ArgumentGenerator& generator) {
  if (n < 1) throw PreconditionError("number of main claims must be >= 1");
  std::string problem;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto batch = generator.main_claims(motion, stance, n, attempt);
    std::set<std::string> seen;
    bool distinct = true;
    for (const auto& a : batch) distinct = seen.insert(a.claim.text).second && distinct;
    if (static_cast<int>(batch.size()) == n && distinct) return batch;
    problem = distinct ? "expected " + std::to_string(n) + " claims, got " + std::to_string(batch.size())
                       : "duplicate claims in generator output";
  }
  throw DebateError("main-claim generation failed after one regeneration: " + problem);
}

namespace {

RehearsalNode* node_at(RehearsalNode& root, const std::vector<std::size_t>& path) {
  RehearsalNode* n = &root;
  for (const auto i : path) n = &n->children[i];
  return n;
}

std::vector<std::string> texts(const std::vector<Argument>& chain, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(chain[i].claim.text);
  return out;
}

}  // namespace

RehearsalTree build_rehearsal_tree(const Argument& root_claim, const Motion& motion, Stance stance,
                                   const RehearsalParams& params, ArgumentGenerator& generator,
                                   scoring::ImpactScorer& scorer, const BuildOptions& options) {
  params.validate();
  if (text::trim(root_claim.claim.text).empty()) throw PreconditionError("root claim must be nonempty");

  RehearsalTree tree;
  tree.stance = stance;
  tree.motion = motion;
  tree.owner = options.owner;
  tree.params = params;
  tree.root.id = 0;
  tree.root.argument = root_claim;
  tree.root.level = 0;
  tree.root.side = stance;

  const auto fail = [&](const std::string& what) {
    throw RehearsalBuildError("rehearsal tree for '" + text::first_words(root_claim.claim.text, 8) + "': " + what,
                              tree);
  };

  try {
    if (options.evidence) tree.root.argument.evidence_refs = options.evidence(motion, tree.root.argument);
    tree.root.support_score = scoring::score_impact(
        {{}, scoring::stance_proposition(motion, stance), root_claim.claim.text, scoring::Relation::Support}, scorer);
  } catch (const std::exception& e) {
    fail(e.what());
  }

  int next_id = 1;
  std::deque<std::vector<std::size_t>> queue{{}};
  while (!queue.empty()) {
    const auto path = std::move(queue.front());
    queue.pop_front();
    RehearsalNode* node = node_at(tree.root, path);
    if (node->level >= params.max_depth) continue;

    std::vector<Argument> chain;
    {
      RehearsalNode* cur = &tree.root;
      chain.push_back(cur->argument);
      for (const auto i : path) {
        cur = &cur->children[i];
        chain.push_back(cur->argument);
      }
    }
    const Stance reply_side = opposite(node->side);
    const int level = node->level + 1;

    std::vector<Argument> replies;
    try {
      replies = generator.replies(motion, reply_side, chain, params.max_branch);
    } catch (const std::exception& e) {
      fail(std::string("expanding node ") + std::to_string(node->id) + ": " + e.what());
    }
    if (static_cast<int>(replies.size()) > params.max_branch) {
      fail("generator returned " + std::to_string(replies.size()) + " replies, more than B=" +
           std::to_string(params.max_branch));
    }

    for (auto& reply : replies) {
      RehearsalNode child;
      child.id = next_id++;
      child.level = level;
      child.side = reply_side;
      child.argument = std::move(reply);
      try {
        if (options.evidence) child.argument.evidence_refs = options.evidence(motion, child.argument);
        const auto n = chain.size();  // ancestors of the child: chain[0..n-1]
        child.attack_score = scoring::score_impact(
            {texts(chain, n - 1), chain[n - 1].claim.text, child.claim_text(), scoring::Relation::Attack}, scorer);
        if (level >= 2) {
          child.support_score = scoring::score_impact(
              {texts(chain, n - 2), chain[n - 2].claim.text, child.claim_text(), scoring::Relation::Support}, scorer);
        }
      } catch (const std::exception& e) {
        node_at(tree.root, path)->children.push_back(child);
        fail(std::string("scoring node ") + std::to_string(child.id) + ": " + e.what());
      }
      node = node_at(tree.root, path);
      node->children.push_back(std::move(child));
      auto child_path = path;
      child_path.push_back(node->children.size() - 1);
      queue.push_back(std::move(child_path));
    }
  }

  compute_strengths(tree);
  return tree;
}

double base_strength(const RehearsalNode& node) {
  const auto need = [&](const std::optional<double>& v, const char* what) {
    if (!v) {
      throw PreconditionError("level-" + std::to_string(node.level) + " node " + std::to_string(node.id) +
                              " is missing its " + what);
    }
    return *v;
  };
  if (node.level == 0) return need(node.support_score, "support score");
  if (node.level == 1) return need(node.attack_score, "attack score");
  return 0.5 * (need(node.attack_score, "attack score") + need(node.support_score, "support score"));
}

double strength(const RehearsalNode& node, int k, double decay) {
  if (k < 0) throw PreconditionError("strength lookahead k must be >= 0");
  const double f0 = base_strength(node);
  if (k == 0 || node.children.empty()) return f0;
  double best = strength(node.children.front(), k - 1, decay);
  for (std::size_t i = 1; i < node.children.size(); ++i) best = std::max(best, strength(node.children[i], k - 1, decay));
  return f0 - decay * best;
}

std::optional<std::size_t> best_reply(const RehearsalNode& node, int k, double decay) {
  if (k < 0) throw PreconditionError("strength lookahead k must be >= 0");
  if (k == 0 || node.children.empty()) return std::nullopt;
  std::size_t arg = 0;
  double best = strength(node.children[0], k - 1, decay);
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    const double v = strength(node.children[i], k - 1, decay);
    if (v > best + 1e-12) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

namespace {

void fill_strengths(RehearsalNode& node, int max_depth, double decay) {
  for (auto& c : node.children) fill_strengths(c, max_depth, decay);
  const int kmax = std::max(0, max_depth - node.level);
  node.strengths.assign(kmax + 1, 0.0);
  const double f0 = base_strength(node);
  node.strengths[0] = f0;
  for (int k = 1; k <= kmax; ++k) {
    if (node.children.empty()) {
      node.strengths[k] = f0;
      continue;
    }
    double best = stored_strength(node.children.front(), k - 1);
    for (const auto& c : node.children) best = std::max(best, stored_strength(c, k - 1));
    node.strengths[k] = f0 - decay * best;
  }
}

}  // namespace

void compute_strengths(RehearsalTree& tree) {
  tree.params.validate();
  fill_strengths(tree.root, tree.params.max_depth, tree.params.decay);
}

ClaimSelection parse_selection(const std::string& reply) {
  ClaimSelection s;
  try {
    const auto j = Json::parse(prompts::extract_json_object(reply));
    const auto& sel = j.at("selection");
    for (const auto& c : sel.at("claims")) s.claims.push_back(std::string(text::trim(c.get<std::string>())));
    s.framework = sel.at("framework").get<std::string>();
    s.explanation = sel.at("explanation").get<std::string>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("selection reply: ") + e.what());
  }
  if (s.claims.empty()) throw ParseError("selection reply lists no claims");
  for (const auto& c : s.claims) {
    if (c.empty()) throw ParseError("selection reply has an empty claim");
  }
  return s;
}

std::string render_selection_prompt(const std::vector<RehearsalTree>& candidates, const Motion& motion,
                                    Stance stance, const std::string& definition, const std::string& context) {
  std::string trees;
  std::string claims;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i) trees += '\n';
    trees += render_outline(candidates[i]);
    claims += std::to_string(i + 1) + ". " + candidates[i].root.claim_text() + "\n";
  }
  return prompts::render_named("claim_selection",
                               {{"motion", motion.text},
                                {"side", std::string(to_string(stance))},
                                {"definition", definition.empty() ? "(not provided)" : definition},
                                {"tree", prompts::fenced(trees)},
                                {"context", context.empty() ? "(not provided)" : prompts::fenced(context)},
                                {"claims", prompts::fenced(claims)}});
}

ClaimSelection select_main_claims(const std::vector<RehearsalTree>& candidates, const Motion& motion, Stance stance,
                                  const std::string& definition, const std::string& context,
                                  provider::ChatProvider& selector, std::int64_t seed) {
  if (candidates.empty()) throw PreconditionError("no candidate trees to select from");
  for (const auto& t : candidates) {
    if (t.root.strengths.empty()) throw PreconditionError("candidate tree strengths are not populated");
  }
  const auto prompt = render_selection_prompt(candidates, motion, stance, definition, context);
  for (int attempt = 0;; ++attempt) {
    provider::ChatRequest req;
    req.prompt = prompt;
    req.seed = seed + attempt;
    req.origin = "rehearsal/select";
    try {
      return parse_selection(selector.chat(req));
    } catch (const ParseError& e) {
      if (attempt >= 1) throw ParseError(std::string("claim selection failed after retry: ") + e.what());
    }
  }
}

}  // namespace debate::rehearsal
