#include "debate/server/http_server.hpp"

#include "httplib.h"
#include "json.hpp"

namespace debate::server {

using Json = nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::optional<std::string> request_id(const httplib::Request& req, const Json& body) {
  if (body.is_object() && body.contains("request_id")) return body.at("request_id").get<std::string>();
  if (req.has_header("X-Request-Id")) return req.get_header_value("X-Request-Id");
  return std::nullopt;
}

Json parse_body(const httplib::Request& req) {
  try {
    const auto j = Json::parse(req.body);
    if (!j.is_object()) throw ParseError("request body must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad JSON body: ") + e.what());
  }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    send_json(res, 404, {{"error", e.what()}});
  } catch (const ConflictError& e) {
    send_json(res, 409, {{"error", e.what()}});
  } catch (const PreconditionError& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const ParseError& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const Json::exception& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", e.what()}});
  }
}

std::string sse_frame(const SessionEvent& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.data.dump() + "\n\n";
}

}  // namespace

HttpServer::HttpServer(SessionManager& sessions) : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      const auto motion = body.at("motion").get<std::string>();
      const auto side = parse_stance(body.at("human_side").get<std::string>());
      std::optional<std::string> id;
      if (body.contains("session_id")) id = body.at("session_id").get<std::string>();
      send_json(res, 201, sessions_.create_session(motion, side, id, request_id(req, body)));
    });
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, sessions_.get_session(req.matches[1])); });
  });

  srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/statements)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      send_json(res, 200,
                sessions_.submit_statement(req.matches[1], body.at("text").get<std::string>(), request_id(req, body)));
    });
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/trees)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, sessions_.get_trees(req.matches[1])); });
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      sessions_.handle(id);  // 404 before the stream starts
      int from = 0;
      if (req.has_param("from")) from = std::stoi(req.get_param_value("from"));
      if (req.has_header("Last-Event-ID")) from = std::stoi(req.get_header_value("Last-Event-ID")) + 1;
      const bool follow = !(req.has_param("follow") && req.get_param_value("follow") == "0");
      auto cursor = std::make_shared<int>(from);
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream", [this, id, follow, cursor](std::size_t,
                                                                                        httplib::DataSink& sink) {
        const auto batch = sessions_.events(id, *cursor, follow ? std::chrono::milliseconds(1000)
                                                                : std::chrono::milliseconds(0));
        for (const auto& e : batch) {
          const auto frame = sse_frame(e);
          if (!sink.write(frame.data(), frame.size())) return false;
          *cursor = e.seq + 1;
        }
        if (!follow || (batch.empty() && sessions_.finished(id))) {
          sink.done();
          return true;
        }
        if (batch.empty()) {
          static const std::string keepalive = ": keepalive\n\n";
          if (!sink.write(keepalive.data(), keepalive.size())) return false;
        }
        return true;
      });
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw DebateError("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw DebateError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace debate::server
