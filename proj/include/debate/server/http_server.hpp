#pragma once

#include <memory>
#include <string>

#include "debate/server/session_manager.hpp"

namespace httplib {
class Server;
}

namespace debate::server {

/// JSON over HTTP:
///   POST /sessions                  {"motion", "human_side", "session_id"?, "request_id"?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/statements  {"text", "request_id"?}
///   GET  /sessions/{id}/trees
///   GET  /sessions/{id}/events      text/event-stream; ?from=N, ?follow=0
/// A request id may also come in the X-Request-Id header. Errors are
/// {"error": message} with 400, 404, 409 or 500.
class HttpServer {
 public:
  explicit HttpServer(SessionManager& sessions);
  ~HttpServer();

  /// Binds and returns the port (pass 0 for any free port). Throws on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call bind first.
  void serve();
  void stop();

 private:
  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace debate::server
