#pragma once

#include <string>

#include "firegraph/service.hpp"

namespace httplib {
class Server;
}

namespace firegraph {

/// HTTP status for an error code: 404 unknown session, 400 bad input,
/// 409 rule violation, 503 resource limit, 500 otherwise.
int http_status(ErrorCode code);

/// POST /session, POST /session/{id}/protect|undo|redo, GET /session/{id},
/// GET /session/{id}/trace, DELETE /session/{id}.
void register_routes(httplib::Server& server, SessionManager& sessions);

/// Blocks serving on host:port.
bool serve(const std::string& host, int port, SessionManager& sessions);

}  // namespace firegraph
