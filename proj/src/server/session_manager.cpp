#include "debate/server/session_manager.hpp"

#include "debate/core/serialize.hpp"
#include "debate/orchestrator/persistence.hpp"
#include "debate/semantic/semantic.hpp"
#include "debate/util/text.hpp"

namespace debate::server {

using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (const char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

Json slot_json(const std::optional<ScheduleSlot>& slot) {
  if (!slot) return nullptr;
  return {{"side", std::string(to_string(slot->side))}, {"stage", std::string(to_string(slot->stage))}};
}

}  // namespace

SessionManager::SessionManager(orchestrator::StagePipelineConfig config, orchestrator::Collaborators collaborators,
                               fs::path root)
    : config_(std::move(config)), collab_(std::move(collaborators)), root_(std::move(root)) {
  config_.validate();
}

orchestrator::DebateEngine SessionManager::engine_for(const std::shared_ptr<Session>& s) {
  auto c = collab_;
  Session* raw = s.get();
  c.events = [this, raw](const std::string& phase, Stance side, Stage stage) {
    push_event(*raw, "phase",
               {{"phase", phase}, {"side", std::string(to_string(side))}, {"stage", std::string(to_string(stage))}});
  };
  return orchestrator::DebateEngine(config_, std::move(c));
}

void SessionManager::push_event(Session& s, const std::string& type, Json data) {
  {
    std::lock_guard lock(s.event_mu);
    s.events.push_back({static_cast<int>(s.events.size()), type, std::move(data)});
  }
  s.event_cv.notify_all();
}

Json SessionManager::trees_json(const DebateState& state) {
  const auto& pro = state.pro_view.own;
  const auto& con = state.con_view.own;
  return {{"pro", {{"document", doc::wrap("flow_tree", doc::to_json(pro))}, {"text", semantic::flow_tree_to_string(pro)}}},
          {"con", {{"document", doc::wrap("flow_tree", doc::to_json(con))}, {"text", semantic::flow_tree_to_string(con)}}},
          {"debate_string", semantic::debate_to_string(pro, con)}};
}

Json SessionManager::view(Session& s) {
  return {{"session_id", s.id},
          {"motion", s.state.motion.text},
          {"human_side", std::string(to_string(s.human_side))},
          {"cursor", s.state.transcript.size()},
          {"next", slot_json(s.state.next_slot())},
          {"complete", s.state.complete()},
          {"state", doc::wrap("debate_state", doc::to_json(s.state))}};
}

void SessionManager::persist(Session& s) {
  if (root_.empty()) return;
  const auto dir = root_ / s.id;
  orchestrator::write_file_atomic(dir / "session.json",
                                  doc::dump(doc::wrap("session", {{"id", s.id},
                                                                  {"motion", s.state.motion.text},
                                                                  {"human_side", std::string(to_string(s.human_side))},
                                                                  {"create_request_id", s.create_request_id}})));
  for (std::size_t t = 0; t < s.state.transcript.size(); ++t) orchestrator::save_turn(dir, s.state, static_cast<int>(t));
  for (const auto& r : s.records) orchestrator::save_stage_record(dir, r);
  orchestrator::save_state(dir, s.state);
}

std::shared_ptr<SessionManager::Session> SessionManager::load_from_disk(const std::string& id) {
  if (root_.empty() || !valid_id(id)) return nullptr;
  const auto dir = root_ / id;
  if (!fs::exists(dir / "session.json")) return nullptr;
  const auto meta = doc::unwrap(doc::parse_json(orchestrator::read_file(dir / "session.json")), "session");
  auto s = std::make_shared<Session>();
  s->id = id;
  s->human_side = parse_stance(doc::require(meta, "human_side").get<std::string>());
  s->create_request_id = meta.value("create_request_id", "");
  auto st = orchestrator::load_state(dir);
  if (!st) throw ParseError("session " + id + " has no state.json");
  s->state = std::move(*st);
  s->records = orchestrator::load_stage_records(dir);
  s->create_response = view(*s);
  return s;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::lock_guard lock(mu_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (auto s = load_from_disk(id)) {
    sessions_[id] = s;
    return s;
  }
  throw NotFoundError("no session '" + id + "'");
}

void SessionManager::engine_turns(Session& s, orchestrator::DebateEngine& engine, Json& engine_statements) {
  while (!s.state.complete() && s.state.next_slot()->side != s.human_side) {
    auto rec = engine.step(s.state);
    engine_statements.push_back(doc::to_json(rec.statement));
    push_event(s, "statement", {{"turn", rec.turn}, {"statement", doc::to_json(rec.statement)}});
    s.records.push_back(std::move(rec));
  }
}

Json SessionManager::create_session(const std::string& motion, Stance human_side,
                                    const std::optional<std::string>& session_id,
                                    const std::optional<std::string>& request_id) {
  if (text::trim(motion).empty()) throw PreconditionError("motion is empty");
  if (session_id && !valid_id(*session_id)) throw PreconditionError("session id must be 1-64 of [A-Za-z0-9_-]");

  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mu_);
    std::string id;
    if (session_id) {
      id = *session_id;
      std::shared_ptr<Session> existing;
      if (auto it = sessions_.find(id); it != sessions_.end()) existing = it->second;
      if (!existing) existing = load_from_disk(id);
      if (existing) {
        sessions_[id] = existing;
        if (request_id && existing->create_request_id == *request_id) {
          std::lock_guard slock(existing->mu);
          return existing->create_response;
        }
        throw ConflictError("session '" + id + "' already exists");
      }
    } else {
      if (request_id) {
        for (const auto& [sid, other] : sessions_) {
          if (other->create_request_id == *request_id) {
            std::lock_guard slock(other->mu);
            return other->create_response;
          }
        }
      }
      do {
        id = "s" + std::to_string(next_id_++);
      } while (sessions_.count(id) || (!root_.empty() && fs::exists(root_ / id)));
    }
    s = std::make_shared<Session>();
    s->id = id;
    s->human_side = human_side;
    s->create_request_id = request_id.value_or("");
    s->state = new_debate_state(make_motion(std::string(text::trim(motion))), static_cast<std::uint64_t>(config_.seed),
                                human_side == Stance::Pro ? "human" : "engine",
                                human_side == Stance::Con ? "human" : "engine");
    sessions_[id] = s;
  }

  std::lock_guard slock(s->mu);
  auto engine = engine_for(s);
  Json engine_statements = Json::array();
  try {
    engine.prepare(s->state, opposite(human_side));
    engine_turns(*s, engine, engine_statements);
  } catch (const std::exception& e) {
    push_event(*s, "error", {{"message", e.what()}});
    persist(*s);
    throw;
  }
  persist(*s);
  auto out = view(*s);
  out["engine_statements"] = engine_statements;
  s->create_response = out;
  return out;
}

Json SessionManager::submit_statement(const std::string& id, const std::string& text,
                                      const std::optional<std::string>& request_id) {
  auto s = find(id);
  std::lock_guard slock(s->mu);
  if (request_id) {
    if (auto it = s->responses.find(*request_id); it != s->responses.end()) return it->second;
  }
  const auto slot = s->state.next_slot();
  if (!slot) throw ConflictError("the debate is complete");
  if (slot->side != s->human_side) throw ConflictError("out of turn: the engine speaks next");
  if (text::trim(text).empty()) throw PreconditionError("statement text is empty");

  auto engine = engine_for(s);
  Json engine_statements = Json::array();
  Statement human = make_statement(slot->side, slot->stage, text);
  try {
    engine.accept(s->state, human);
    push_event(*s, "statement",
               {{"turn", s->state.transcript.size() - 1}, {"statement", doc::to_json(s->state.transcript.back())}});
    engine_turns(*s, engine, engine_statements);
  } catch (const std::exception& e) {
    push_event(*s, "error", {{"message", e.what()}});
    persist(*s);
    throw;
  }
  persist(*s);
  Json out{{"session_id", s->id},
           {"human_statement", doc::to_json(human)},
           {"engine_statements", engine_statements},
           {"cursor", s->state.transcript.size()},
           {"next", slot_json(s->state.next_slot())},
           {"complete", s->state.complete()},
           {"trees", trees_json(s->state)}};
  if (request_id) s->responses[*request_id] = out;
  return out;
}

Json SessionManager::get_session(const std::string& id) {
  auto s = find(id);
  std::lock_guard slock(s->mu);
  return view(*s);
}

Json SessionManager::get_trees(const std::string& id) {
  auto s = find(id);
  std::lock_guard slock(s->mu);
  return trees_json(s->state);
}

SessionHandle SessionManager::handle(const std::string& id) {
  auto s = find(id);
  std::lock_guard slock(s->mu);
  return {s->id, s->state.motion, s->human_side, static_cast<int>(s->state.transcript.size())};
}

DebateState SessionManager::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard slock(s->mu);
  return s->state;
}

std::vector<SessionEvent> SessionManager::events(const std::string& id, int from, std::chrono::milliseconds wait) {
  auto s = find(id);
  std::unique_lock lock(s->event_mu);
  const auto ready = [&] { return static_cast<int>(s->events.size()) > from; };
  if (!ready() && wait.count() > 0) s->event_cv.wait_for(lock, wait, ready);
  std::vector<SessionEvent> out;
  for (std::size_t i = static_cast<std::size_t>(std::max(0, from)); i < s->events.size(); ++i) out.push_back(s->events[i]);
  return out;
}

bool SessionManager::finished(const std::string& id) {
  auto s = find(id);
  std::unique_lock lock(s->mu, std::try_to_lock);
  // A held lock means a request is still producing events.
  if (!lock.owns_lock()) return false;
  return s->state.complete();
}

}  // namespace debate::server
