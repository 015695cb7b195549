#include "firegraph/server.hpp"

#include <httplib.h>

#include "firegraph/error.hpp"

namespace firegraph {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::parse_error:
    case ErrorCode::invalid_argument: return 400;
    case ErrorCode::protection_overlap:
    case ErrorCode::budget_exceeded:
    case ErrorCode::non_monotone_budget:
    case ErrorCode::partition_infeasible:
    case ErrorCode::hypothesis_violation: return 409;
    case ErrorCode::resource_limit:
    case ErrorCode::scan_cap_exceeded: return 503;
    default: return 500;
  }
}

namespace {

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      res.status = http_status(e.code());
      res.set_content(error_json(e).dump(), "application/json");
    } catch (const Json::exception& e) {
      res.status = 400;
      res.set_content(error_json(Error(ErrorCode::parse_error, e.what())).dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(Json{{"error", "internal"}, {"message", e.what()}, {"detail", Json::array()}}.dump(),
                      "application/json");
    }
  };
}

Json body_json(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("request body is not JSON: ") + e.what());
  }
}

void reply(httplib::Response& res, const Json& j) { res.set_content(j.dump(), "application/json"); }

}  // namespace

void register_routes(httplib::Server& server, SessionManager& sessions) {
  const std::string id = R"(/session/([0-9a-f]+))";
  server.Post("/session", guarded([&](const httplib::Request& req, httplib::Response& res) {
                res.status = 201;
                reply(res, sessions.create(body_json(req)));
              }));
  server.Post(id + "/protect", guarded([&](const httplib::Request& req, httplib::Response& res) {
                reply(res, sessions.protect(req.matches[1], body_json(req)));
              }));
  server.Post(id + "/undo", guarded([&](const httplib::Request& req, httplib::Response& res) {
                reply(res, sessions.undo(req.matches[1]));
              }));
  server.Post(id + "/redo", guarded([&](const httplib::Request& req, httplib::Response& res) {
                reply(res, sessions.redo(req.matches[1]));
              }));
  server.Get(id + "/trace", guarded([&](const httplib::Request& req, httplib::Response& res) {
               res.set_content(sessions.trace(req.matches[1]), "application/x-ndjson");
             }));
  server.Get(id, guarded([&](const httplib::Request& req, httplib::Response& res) {
               reply(res, sessions.state(req.matches[1]));
             }));
  server.Delete(id, guarded([&](const httplib::Request& req, httplib::Response& res) {
                  const std::string sid = req.matches[1];
                  if (!sessions.close(sid)) throw Error(ErrorCode::not_found, "no session '" + sid + "'", {sid});
                  res.status = 204;
                }));
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"ok":true})", "application/json");
  });
}

bool serve(const std::string& host, int port, SessionManager& sessions) {
  httplib::Server server;
  register_routes(server, sessions);
  return server.listen(host, port);
}

}  // namespace firegraph
