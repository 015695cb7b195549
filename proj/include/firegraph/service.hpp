#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firegraph/error.hpp"
#include "firegraph/game.hpp"

namespace firegraph {

/// "ball:m" for B(base, m), otherwise a ';'-separated key list.
std::vector<VertexKey> parse_x0(const LazyGraph& g, std::string_view text);

/// Throws invalid_argument unless every key names a vertex of g.
void require_vertices(const LazyGraph& g, std::span<const VertexKey> keys);

/// Structured error body shared by the CLI and HTTP layers.
Json error_json(const Error& e);

/// In-memory game sessions. Requests on one session are serialized by its
/// own mutex; distinct sessions proceed independently.
class SessionManager {
 public:
  /// body: {family, x0, budget, r}. Returns {id, state}.
  Json create(const Json& body);
  /// body: array of keys (or {"protect": [...]}). Returns the new state.
  Json protect(const std::string& id, const Json& body);
  Json undo(const std::string& id);
  Json redo(const std::string& id);
  Json state(const std::string& id) const;
  /// JSON-lines trace of the moves so far, replayable by replay_jsonl().
  std::string trace(const std::string& id) const;
  bool close(const std::string& id);
  std::size_t size() const;

 private:
  struct Session {
    std::string id;
    std::string family;
    std::optional<LazyGraph> graph;
    std::vector<VertexKey> x0;
    BudgetSeq budget;
    std::int64_t r = 1;
    std::vector<std::vector<VertexKey>> moves;
    std::vector<std::vector<VertexKey>> redo;
    std::unique_ptr<FireSimulation> sim;
    std::mutex mutex;

    void rebuild();
    Json state_json() const;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string fresh_id();

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mutex_;
};

}  // namespace firegraph
