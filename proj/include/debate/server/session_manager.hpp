#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "debate/core/errors.hpp"
#include "debate/core/state.hpp"
#include "debate/orchestrator/orchestrator.hpp"

namespace debate::server {

class NotFoundError : public DebateError {
 public:
  using DebateError::DebateError;
};

/// Duplicate session id, or a request arriving when it is not the human's turn.
class ConflictError : public DebateError {
 public:
  using DebateError::DebateError;
};

struct SessionEvent {
  int seq = 0;
  std::string type;  // "phase", "statement", "error"
  nlohmann::json data;
};

struct SessionHandle {
  std::string id;
  Motion motion;
  Stance human_side = Stance::Pro;
  /// Index of the next schedule slot.
  int cursor = 0;
};

/// Interactive human-vs-engine sessions. Each session owns its state and
/// serializes its own requests; different sessions run in parallel.
class SessionManager {
 public:
  /// `root` may be empty for in-memory sessions. Collaborators are shared by
  /// every session and must be safe for concurrent use.
  SessionManager(orchestrator::StagePipelineConfig config, orchestrator::Collaborators collaborators,
                 std::filesystem::path root = {});

  /// Builds the engine side's preparation and, when the human speaks second,
  /// the engine's opening. A repeated request id returns the first response;
  /// an existing id otherwise is a ConflictError.
  nlohmann::json create_session(const std::string& motion, Stance human_side,
                                const std::optional<std::string>& session_id = std::nullopt,
                                const std::optional<std::string>& request_id = std::nullopt);

  /// Human speech for the current slot, then the engine's reply if the
  /// schedule continues.
  nlohmann::json submit_statement(const std::string& id, const std::string& text,
                                  const std::optional<std::string>& request_id = std::nullopt);

  nlohmann::json get_session(const std::string& id);
  nlohmann::json get_trees(const std::string& id);
  SessionHandle handle(const std::string& id);
  DebateState state(const std::string& id);

  /// Events with seq >= `from`. Blocks up to `wait` for new ones when none
  /// are available yet.
  std::vector<SessionEvent> events(const std::string& id, int from,
                                   std::chrono::milliseconds wait = std::chrono::milliseconds(0));
  bool finished(const std::string& id);

 private:
  struct Session {
    std::string id;
    Stance human_side = Stance::Pro;
    DebateState state;
    std::vector<orchestrator::StageRecord> records;
    std::map<std::string, nlohmann::json> responses;  // by request id
    std::string create_request_id;
    nlohmann::json create_response;

    std::mutex mu;  // serializes requests
    std::mutex event_mu;
    std::condition_variable event_cv;
    std::vector<SessionEvent> events;
  };

  std::shared_ptr<Session> find(const std::string& id);
  std::shared_ptr<Session> load_from_disk(const std::string& id);
  orchestrator::DebateEngine engine_for(const std::shared_ptr<Session>& s);
  void push_event(Session& s, const std::string& type, nlohmann::json data);
  void persist(Session& s);
  void engine_turns(Session& s, orchestrator::DebateEngine& engine, nlohmann::json& engine_statements);
  nlohmann::json view(Session& s);
  static nlohmann::json trees_json(const DebateState& state);

  orchestrator::StagePipelineConfig config_;
  orchestrator::Collaborators collab_;
  std::filesystem::path root_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  int next_id_ = 1;
};

}  // namespace debate::server
