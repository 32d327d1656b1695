#include "debate/core/serialize.hpp"

#include <algorithm>
#include <set>

#include "debate/core/errors.hpp"
#include "debate/util/text.hpp"

namespace debate::doc {

namespace {

// Keep the public overloads visible next to the node helpers below.
using doc::to_json;

template <typename T>
T get_as(const Json& j, std::string_view key) {
  const Json& v = require(j, key);
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw ParseError("field '" + std::string(key) + "' has the wrong type");
  }
}

std::string get_string(const Json& j, std::string_view key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

int get_int(const Json& j, std::string_view key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ParseError("field '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

double get_number(const Json& j, std::string_view key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ParseError("field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

const Json& get_array(const Json& j, std::string_view key) {
  const Json& v = require(j, key);
  if (!v.is_array()) throw ParseError("field '" + std::string(key) + "' must be an array");
  return v;
}

std::optional<double> optional_number(const Json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError("field '" + std::string(key) + "' must be a number");
  return it->get<double>();
}

Json to_json(const FlowNode& n) {
  Json j;
  j["id"] = n.id;
  j["claim"] = to_json(n.claim);
  j["arguments"] = n.arguments;
  j["side"] = to_string(n.side);
  j["status"] = to_string(n.status);
  j["visits"] = n.visits;
  if (n.created_at) {
    j["created_at"] = Json{{"stage", to_string(n.created_at->stage)}, {"turn", n.created_at->turn}};
  }
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  j["children"] = std::move(children);
  return j;
}

FlowNode flow_node_from_json(const Json& j, std::set<int>& seen) {
  FlowNode n;
  n.id = get_int(j, "id");
  if (!seen.insert(n.id).second) {
    throw ParseError("cyclic or shared structure: node id " + std::to_string(n.id) + " appears twice");
  }
  n.claim = claim_from_json(require(j, "claim"));
  n.arguments = get_as<std::vector<std::string>>(j, "arguments");
  n.side = parse_stance(get_string(j, "side"));
  n.status = parse_node_status(get_string(j, "status"));
  n.visits = get_int(j, "visits");
  if (const auto it = j.find("created_at"); it != j.end()) {
    n.created_at = TurnStamp{parse_stage(get_string(*it, "stage")), get_int(*it, "turn")};
  }
  for (const auto& c : get_array(j, "children")) n.children.push_back(flow_node_from_json(c, seen));
  return n;
}

Json to_json(const RehearsalNode& n) {
  Json j;
  j["id"] = n.id;
  j["argument"] = to_json(n.argument);
  j["level"] = n.level;
  j["side"] = to_string(n.side);
  if (n.attack_score) j["attack_score"] = *n.attack_score;
  if (n.support_score) j["support_score"] = *n.support_score;
  j["strengths"] = n.strengths;
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  j["children"] = std::move(children);
  return j;
}

RehearsalNode rehearsal_node_from_json(const Json& j, std::set<int>& seen) {
  RehearsalNode n;
  n.id = get_int(j, "id");
  if (!seen.insert(n.id).second) {
    throw ParseError("cyclic or shared structure: node id " + std::to_string(n.id) + " appears twice");
  }
  n.argument = argument_from_json(require(j, "argument"));
  n.level = get_int(j, "level");
  n.side = parse_stance(get_string(j, "side"));
  n.attack_score = optional_number(j, "attack_score");
  n.support_score = optional_number(j, "support_score");
  n.strengths = get_as<std::vector<double>>(j, "strengths");
  for (const auto& c : get_array(j, "children")) n.children.push_back(rehearsal_node_from_json(c, seen));
  return n;
}

Json to_json(const SidePreparation& p) {
  Json j;
  Json own = Json::array(), opp = Json::array();
  for (const auto& t : p.forest.own) own.push_back(to_json(t));
  for (const auto& t : p.forest.opponent) opp.push_back(to_json(t));
  j["forest"] = Json{{"own", std::move(own)}, {"opponent", std::move(opp)}};
  j["forest_ready"] = p.forest_ready;
  Json claims = Json::array();
  for (const auto& c : p.main_claims) claims.push_back(to_json(c));
  j["main_claims"] = std::move(claims);
  j["framework"] = p.framework;
  j["explanation"] = p.explanation;
  j["claims_selected"] = p.claims_selected;
  j["definition"] = p.definition;
  return j;
}

SidePreparation side_prep_from_json(const Json& j) {
  SidePreparation p;
  const Json& forest = require(j, "forest");
  for (const auto& t : get_array(forest, "own")) p.forest.own.push_back(rehearsal_tree_from_json(t));
  for (const auto& t : get_array(forest, "opponent")) p.forest.opponent.push_back(rehearsal_tree_from_json(t));
  p.forest_ready = get_as<bool>(j, "forest_ready");
  for (const auto& c : get_array(j, "main_claims")) p.main_claims.push_back(claim_from_json(c));
  p.framework = get_string(j, "framework");
  p.explanation = get_string(j, "explanation");
  p.claims_selected = get_as<bool>(j, "claims_selected");
  p.definition = get_string(j, "definition");
  return p;
}

Json to_json(const FlowView& v) {
  return Json{{"own", to_json(v.own)}, {"opponent", to_json(v.opponent)}};
}

FlowView flow_view_from_json(const Json& j, Stance self) {
  FlowView v(self);
  v.own = flow_tree_from_json(require(j, "own"));
  v.opponent = flow_tree_from_json(require(j, "opponent"));
  if (v.own.owner() != self || v.opponent.owner() != opposite(self)) {
    throw ParseError("flow view trees have the wrong owners");
  }
  return v;
}

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json wrap(std::string_view kind, Json value) {
  Json j;
  j["kind"] = std::string(kind);
  j["schema_version"] = kSchemaVersion;
  j["value"] = std::move(value);
  return j;
}

Json unwrap(const Json& document, std::string_view kind) {
  if (!document.is_object()) throw ParseError("document must be a JSON object");
  const int version = get_int(document, "schema_version");
  if (version != kSchemaVersion) {
    throw ParseError("unsupported schema_version " + std::to_string(version));
  }
  const auto k = get_string(document, "kind");
  if (k != kind) throw ParseError("expected a '" + std::string(kind) + "' document, got '" + k + "'");
  return require(document, "value");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const Json& require(const Json& j, std::string_view key) {
  if (!j.is_object()) throw ParseError("expected an object while reading '" + std::string(key) + "'");
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw ParseError("missing required field '" + std::string(key) + "'");
  return *it;
}

Json to_json(const Motion& m) { return Json{{"id", m.id}, {"text", m.text}}; }

Motion motion_from_json(const Json& j) {
  Motion m{get_string(j, "id"), get_string(j, "text")};
  if (text::trim(m.text).empty()) throw ParseError("motion text must be nonempty");
  return m;
}

Json to_json(const Claim& c) {
  Json j{{"text", c.text}};
  if (c.embedding) j["embedding"] = *c.embedding;
  return j;
}

Claim claim_from_json(const Json& j) {
  Claim c(get_string(j, "text"));
  if (c.text.empty()) throw ParseError("claim text must be nonempty");
  if (const auto it = j.find("embedding"); it != j.end()) c.embedding = it->get<std::vector<double>>();
  return c;
}

Json to_json(const Argument& a) {
  return Json{{"claim", to_json(a.claim)}, {"support_text", a.support_text}, {"evidence_refs", a.evidence_refs}};
}

Argument argument_from_json(const Json& j) {
  Argument a;
  a.claim = claim_from_json(require(j, "claim"));
  a.support_text = get_string(j, "support_text");
  a.evidence_refs = get_as<std::vector<std::string>>(j, "evidence_refs");
  return a;
}

Json to_json(const ActionTuple& t) {
  Json j{{"kind", to_string(t.kind)}, {"claim", to_json(t.claim)}, {"argument", t.argument}};
  if (t.target) j["target"] = to_json(*t.target);
  return j;
}

ActionTuple action_tuple_from_json(const Json& j) {
  ActionTuple t;
  t.kind = parse_action_kind(get_string(j, "kind"));
  t.claim = claim_from_json(require(j, "claim"));
  t.argument = get_string(j, "argument");
  if (const auto it = j.find("target"); it != j.end()) t.target = claim_from_json(*it);
  if (!satisfies_target_rule(t)) throw ParseError("action tuple violates the target rule");
  return t;
}

Json to_json(const Statement& s) {
  Json j{{"side", to_string(s.side)},
         {"stage", to_string(s.stage)},
         {"text", s.text},
         {"word_count", s.word_count}};
  if (s.plan) j["plan"] = *s.plan;
  if (s.estimated_duration) j["estimated_duration"] = *s.estimated_duration;
  return j;
}

Statement statement_from_json(const Json& j) {
  Statement s;
  s.side = parse_stance(get_string(j, "side"));
  s.stage = parse_stage(get_string(j, "stage"));
  s.text = get_string(j, "text");
  s.word_count = get_as<std::size_t>(j, "word_count");
  if (s.word_count != text::word_count(s.text)) throw ParseError("statement word_count does not match its text");
  if (const auto it = j.find("plan"); it != j.end()) s.plan = it->get<std::string>();
  s.estimated_duration = optional_number(j, "estimated_duration");
  return s;
}

Json to_json(const DebateFlowTree& t) {
  return Json{{"owner", to_string(t.owner())}, {"next_id", t.next_id()}, {"root", to_json(t.root())}};
}

DebateFlowTree flow_tree_from_json(const Json& j) {
  return guarded([&] {
    const Stance owner = parse_stance(get_string(j, "owner"));
    const int next_id = get_int(j, "next_id");
    std::set<int> seen;
    FlowNode root = flow_node_from_json(require(j, "root"), seen);
    if (root.id != DebateFlowTree::kRootId) throw ParseError("flow tree root must have id 0");
    if (!seen.empty() && *seen.rbegin() >= next_id) throw ParseError("flow tree next_id is not above every node id");
    return DebateFlowTree::from_parts(owner, std::move(root), next_id);
  });
}

Json to_json(const RehearsalTree& t) {
  return Json{{"root", to_json(t.root)},
              {"stance", to_string(t.stance)},
              {"motion", to_json(t.motion)},
              {"owner", to_string(t.owner)},
              {"params", Json{{"max_branch", t.params.max_branch},
                              {"max_depth", t.params.max_depth},
                              {"decay", t.params.decay}}}};
}

RehearsalTree rehearsal_tree_from_json(const Json& j) {
  return guarded([&] {
    RehearsalTree t;
    std::set<int> seen;
    t.root = rehearsal_node_from_json(require(j, "root"), seen);
    t.stance = parse_stance(get_string(j, "stance"));
    t.motion = motion_from_json(require(j, "motion"));
    t.owner = parse_tree_owner(get_string(j, "owner"));
    const Json& p = require(j, "params");
    t.params.max_branch = get_int(p, "max_branch");
    t.params.max_depth = get_int(p, "max_depth");
    t.params.decay = get_number(p, "decay");
    try {
      t.params.validate();
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
    return t;
  });
}

Json to_json(const CandidateAction& a) {
  Json j{{"kind", to_string(a.kind)}, {"target_claim", a.target_claim}, {"k_used", a.k_used}};
  if (a.target) j["target"] = Json{{"tree_owner", to_string(a.target->tree_owner)}, {"node_id", a.target->node_id}};
  Json retrieved = Json::array();
  for (const auto& r : a.retrieved) {
    retrieved.push_back(Json{{"forest", to_string(r.forest)},
                             {"tree_index", r.tree_index},
                             {"node_id", r.node_id},
                             {"level", r.level},
                             {"side", to_string(r.side)},
                             {"claim", r.claim},
                             {"strength", r.strength},
                             {"similarity", r.similarity}});
  }
  j["retrieved"] = std::move(retrieved);
  return j;
}

CandidateAction candidate_action_from_json(const Json& j) {
  return guarded([&] {
    CandidateAction a;
    a.kind = parse_action_kind(get_string(j, "kind"));
    a.target_claim = get_string(j, "target_claim");
    a.k_used = get_int(j, "k_used");
    if (const auto it = j.find("target"); it != j.end()) {
      a.target = FlowNodeRef{parse_stance(get_string(*it, "tree_owner")), get_int(*it, "node_id")};
    }
    for (const auto& r : get_array(j, "retrieved")) {
      RetrievedArgument ra;
      ra.forest = parse_tree_owner(get_string(r, "forest"));
      ra.tree_index = get_int(r, "tree_index");
      ra.node_id = get_int(r, "node_id");
      ra.level = get_int(r, "level");
      ra.side = parse_stance(get_string(r, "side"));
      ra.claim = get_string(r, "claim");
      ra.strength = get_number(r, "strength");
      ra.similarity = get_number(r, "similarity");
      a.retrieved.push_back(std::move(ra));
    }
    return a;
  });
}

Json to_json(const Battlefield& b) {
  Json actions = Json::array();
  for (const auto& a : b.actions) actions.push_back(to_json(a));
  return Json{{"description", b.description},
              {"importance", to_string(b.importance)},
              {"rationale", b.rationale},
              {"actions", std::move(actions)}};
}

Battlefield battlefield_from_json(const Json& j) {
  return guarded([&] {
    Battlefield b;
    b.description = get_string(j, "description");
    b.importance = parse_importance(get_string(j, "importance"));
    b.rationale = get_string(j, "rationale");
    for (const auto& a : get_array(j, "actions")) b.actions.push_back(candidate_action_from_json(a));
    if (b.actions.empty()) throw ParseError("battlefield must carry at least one action");
    return b;
  });
}

Json to_json(const DebateState& s) {
  Json j;
  j["motion"] = to_json(s.motion);
  Json debaters = Json::object();
  for (const auto& [side, name] : s.debaters) debaters[std::string(to_string(side))] = name;
  j["debaters"] = std::move(debaters);
  Json schedule = Json::array();
  for (const auto& slot : s.schedule) {
    schedule.push_back(Json{{"side", to_string(slot.side)}, {"stage", to_string(slot.stage)}});
  }
  j["schedule"] = std::move(schedule);
  j["views"] = Json{{"pro", to_json(s.pro_view)}, {"con", to_json(s.con_view)}};
  Json transcript = Json::array();
  for (const auto& st : s.transcript) transcript.push_back(to_json(st));
  j["transcript"] = std::move(transcript);
  j["rng_seed"] = s.rng_seed;
  j["preparation"] = Json{{"pro", to_json(s.pro_prep)}, {"con", to_json(s.con_prep)}};
  return j;
}

DebateState debate_state_from_json(const Json& j) {
  return guarded([&] {
    DebateState s;
    s.motion = motion_from_json(require(j, "motion"));
    const Json& debaters = require(j, "debaters");
    s.debaters[Stance::Pro] = get_string(debaters, "pro");
    s.debaters[Stance::Con] = get_string(debaters, "con");
    for (const auto& slot : get_array(j, "schedule")) {
      s.schedule.push_back({parse_stance(get_string(slot, "side")), parse_stage(get_string(slot, "stage"))});
    }
    const auto& oxford = oxford_schedule();
    if (!std::equal(s.schedule.begin(), s.schedule.end(), oxford.begin(), oxford.end())) {
      throw ParseError("schedule is not the Oxford order");
    }
    const Json& views = require(j, "views");
    s.pro_view = flow_view_from_json(require(views, "pro"), Stance::Pro);
    s.con_view = flow_view_from_json(require(views, "con"), Stance::Con);
    for (const auto& st : get_array(j, "transcript")) s.transcript.push_back(statement_from_json(st));
    if (s.transcript.size() > s.schedule.size()) throw ParseError("transcript is longer than the schedule");
    for (std::size_t i = 0; i < s.transcript.size(); ++i) {
      if (s.transcript[i].side != s.schedule[i].side || s.transcript[i].stage != s.schedule[i].stage) {
        throw ParseError("transcript entry " + std::to_string(i) + " is out of schedule order");
      }
    }
    s.rng_seed = get_as<std::uint64_t>(j, "rng_seed");
    const Json& prep = require(j, "preparation");
    s.pro_prep = side_prep_from_json(require(prep, "pro"));
    s.con_prep = side_prep_from_json(require(prep, "con"));
    return s;
  });
}

std::string serialize(const DebateFlowTree& t) { return dump(wrap("flow_tree", to_json(t))); }
std::string serialize(const RehearsalTree& t) { return dump(wrap("rehearsal_tree", to_json(t))); }
std::string serialize(const DebateState& s) { return dump(wrap("debate_state", to_json(s))); }

DebateFlowTree parse_flow_tree(std::string_view document) {
  return flow_tree_from_json(unwrap(parse_json(document), "flow_tree"));
}

RehearsalTree parse_rehearsal_tree(std::string_view document) {
  return rehearsal_tree_from_json(unwrap(parse_json(document), "rehearsal_tree"));
}

DebateState parse_debate_state(std::string_view document) {
  return debate_state_from_json(unwrap(parse_json(document), "debate_state"));
}

}  // namespace debate::doc
