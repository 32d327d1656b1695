#include "debate/orchestrator/battlefield.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "debate/util/text.hpp"

namespace debate::orchestrator {

namespace {

struct Group {
  std::string description;
  std::vector<CandidateAction> actions;
  double best = 0.0;
  bool any_retrieved = false;
  int visits = 0;
  std::size_t first_seen = 0;
};

// Id of the main claim (depth 1) above `id`.
int top_level_of(const DebateFlowTree& tree, int id) {
  int cur = id;
  while (true) {
    const auto* parent = tree.parent_of(cur);
    if (!parent || parent->id == DebateFlowTree::kRootId) return cur;
    cur = parent->id;
  }
}

int subtree_visits(const FlowNode& n) {
  int total = n.visits;
  for (const auto& c : n.children) total += subtree_visits(c);
  return total;
}

std::string quote_safe(const std::string& s) { return text::replace_all(s, "\"", "'"); }

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<Battlefield> assemble_battlefields(const std::vector<CandidateAction>& actions, const FlowView& view) {
  std::vector<Group> groups;
  std::map<std::pair<int, int>, std::size_t> by_subtree;  // (tree owner, main claim id)

  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& a = actions[i];
    std::size_t gi = 0;
    if (!a.target) {
      Group g;
      g.description = a.target_claim.empty() ? "Open slot for a new main claim" : "New main claim: " + a.target_claim;
      g.first_seen = i;
      groups.push_back(std::move(g));
      gi = groups.size() - 1;
    } else {
      const auto& tree = view.tree_of(a.target->tree_owner);
      const int top = top_level_of(tree, a.target->node_id);
      const auto key = std::make_pair(static_cast<int>(a.target->tree_owner), top);
      auto it = by_subtree.find(key);
      if (it == by_subtree.end()) {
        Group g;
        const auto* node = tree.find(top);
        g.description = std::string(a.target->tree_owner == Stance::Pro ? "Pro" : "Con") +
                        " main claim: " + (node ? node->claim.text : std::string());
        g.visits = node ? subtree_visits(*node) : 0;
        g.first_seen = i;
        groups.push_back(std::move(g));
        it = by_subtree.emplace(key, groups.size() - 1).first;
      }
      gi = it->second;
    }
    auto& g = groups[gi];
    for (const auto& r : a.retrieved) {
      if (!g.any_retrieved || r.strength > g.best) g.best = r.strength;
      g.any_retrieved = true;
    }
    g.actions.push_back(a);
  }

  std::stable_sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) {
    const double bx = x.any_retrieved ? x.best : -1.0;
    const double by = y.any_retrieved ? y.best : -1.0;
    if (bx != by) return bx > by;
    return x.visits > y.visits;
  });

  const std::size_t n = groups.size();
  std::vector<Battlefield> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto& g = groups[r];
    Battlefield b;
    b.description = g.description;
    // rank r in [0, n): top third high, middle third medium
    if (3 * r < n) {
      b.importance = Importance::High;
    } else if (3 * r < 2 * n) {
      b.importance = Importance::Medium;
    } else {
      b.importance = Importance::Low;
    }
    b.rationale = (g.any_retrieved ? "best prepared strength " + two_decimals(g.best) : std::string("no prepared material")) +
                  ", " + std::to_string(g.visits) + " visits so far";
    b.actions = std::move(g.actions);
    out.push_back(std::move(b));
  }
  return out;
}

std::string render_battlefields(const std::vector<Battlefield>& battlefields) {
  if (battlefields.empty()) return "(no battlefields)\n";
  std::string out;
  for (const auto& b : battlefields) {
    out += "**Battlefield Importance**: " + std::string(to_string(b.importance)) + "\n";
    out += "**Battlefield**: " + quote_safe(b.description) + "\n";
    out += "**Battlefield Rationale**: " + b.rationale + "\n";
    out += "**Actions**:\n";
    for (const auto& a : b.actions) {
      out += "- " + std::string(to_string(a.kind)) + " | ";
      if (a.kind == ActionKind::Propose && a.target_claim.empty()) {
        out += "open slot for a new main claim\n";
        continue;
      }
      out += std::string(a.kind == ActionKind::Propose ? "claim" : "target") + ": \"" + quote_safe(a.target_claim) +
             "\" | prepared: ";
      if (a.retrieved.empty()) {
        out += "none";
      } else {
        for (std::size_t i = 0; i < a.retrieved.size(); ++i) {
          const auto& r = a.retrieved[i];
          if (i) out += "; ";
          out += "\"" + quote_safe(r.claim) + "\" (f" + std::to_string(a.k_used) + "=" + two_decimals(r.strength) + ")";
        }
      }
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace debate::orchestrator
