#include "firegraph/service.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <random>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"

namespace firegraph {

std::vector<VertexKey> parse_x0(const LazyGraph& g, std::string_view text) {
  if (text.starts_with("ball:")) {
    auto digits = text.substr(5);
    std::int64_t m = -1;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec != std::errc() || p != digits.data() + digits.size() || m < 0) {
      throw Error(ErrorCode::parse_error, "bad ball radius in '" + std::string(text) + "'");
    }
    return sorted(ball(g, g.base(), m).members);
  }
  auto keys = parse_key_list(text);
  if (keys.empty()) throw Error(ErrorCode::invalid_argument, "initial fire is empty");
  require_vertices(g, keys);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

void require_vertices(const LazyGraph& g, std::span<const VertexKey> keys) {
  for (const auto& k : keys) {
    try {
      (void)g.neighbors(k);
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_argument, e.what(), {to_string(k)});
    }
  }
}

Json error_json(const Error& e) {
  return Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", e.detail()}};
}

namespace {

std::vector<VertexKey> keys_from_body(const Json& body, const char* field) {
  const Json* arr = &body;
  if (body.is_object()) {
    if (!body.contains(field)) throw Error(ErrorCode::parse_error, std::string("missing '") + field + "'");
    arr = &body.at(field);
  }
  if (!arr->is_array()) throw Error(ErrorCode::parse_error, "expected an array of vertex keys");
  try {
    return keys_from_json(*arr);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

}  // namespace

void SessionManager::Session::rebuild() {
  sim = std::make_unique<FireSimulation>(*graph, x0, r);
  for (const auto& w : moves) sim->advance(w);
}

Json SessionManager::Session::state_json() const {
  const auto& st = sim->state();
  return Json{{"id", id},
              {"family", family},
              {"r", r},
              {"budget", budget.to_string()},
              {"turn", st.turn},
              {"next_budget", budget.at(st.turn + 1)},
              {"x0", keys_json(x0)},
              {"burning", keys_json(sorted(st.burning))},
              {"protected", keys_json(sorted(st.protected_set))},
              {"newly_burned", keys_json(sim->newly_burned())},
              {"can_undo", !moves.empty()},
              {"can_redo", !redo.empty()}};
}

std::string SessionManager::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[17];
  std::lock_guard lock(id_mutex_);
  std::uniform_int_distribution<std::uint64_t> dist;
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(dist(rng)));
  return buf;
}

Json SessionManager::create(const Json& body) {
  if (!body.is_object()) throw Error(ErrorCode::parse_error, "session body must be an object");
  auto text = [&](const char* key, const char* fallback) -> std::string {
    if (!body.contains(key)) {
      if (fallback) return fallback;
      throw Error(ErrorCode::parse_error, std::string("missing '") + key + "'");
    }
    const Json& v = body.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    throw Error(ErrorCode::parse_error, std::string("'") + key + "' must be a string");
  };
  auto s = std::make_shared<Session>();
  const FamilySpec spec = FamilySpec::parse(text("family", nullptr));
  s->family = spec.to_string();
  s->graph = make_graph(spec);
  if (body.contains("x0") && body.at("x0").is_array()) {
    s->x0 = keys_from_body(body, "x0");
    require_vertices(*s->graph, s->x0);
    std::sort(s->x0.begin(), s->x0.end());
    s->x0.erase(std::unique(s->x0.begin(), s->x0.end()), s->x0.end());
    if (s->x0.empty()) throw Error(ErrorCode::invalid_argument, "initial fire is empty");
  } else {
    s->x0 = parse_x0(*s->graph, text("x0", "ball:0"));
  }
  s->budget = BudgetSeq::parse(text("budget", nullptr));
  if (!s->budget.serializable()) throw Error(ErrorCode::invalid_argument, "budget must have a text form");
  if (body.contains("r")) {
    if (!body.at("r").is_number_integer()) throw Error(ErrorCode::parse_error, "'r' must be an integer");
    s->r = body.at("r").get<std::int64_t>();
  }
  if (s->r < 1 || s->r > 64) throw Error(ErrorCode::invalid_argument, "r must be in 1..64");
  s->rebuild();

  std::unique_lock lock(mutex_);
  do {
    s->id = fresh_id();
  } while (sessions_.contains(s->id));
  sessions_.emplace(s->id, s);
  std::lock_guard session_lock(s->mutex);
  return Json{{"id", s->id}, {"state", s->state_json()}};
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + id + "'", {id});
  return it->second;
}

Json SessionManager::protect(const std::string& id, const Json& body) {
  auto s = find(id);
  auto w = keys_from_body(body, "protect");
  std::lock_guard lock(s->mutex);
  require_vertices(*s->graph, w);
  const std::int64_t turn = s->sim->state().turn + 1;
  if (static_cast<std::int64_t>(w.size()) > s->budget.at(turn)) {
    throw Error(ErrorCode::budget_exceeded,
                "turn " + std::to_string(turn) + " allows " + std::to_string(s->budget.at(turn)) +
                    " protections, got " + std::to_string(w.size()),
                {std::to_string(turn)});
  }
  std::sort(w.begin(), w.end());
  s->sim->advance(w);  // validates before mutating
  s->moves.push_back(std::move(w));
  s->redo.clear();
  return s->state_json();
}

Json SessionManager::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->moves.empty()) throw Error(ErrorCode::invalid_argument, "nothing to undo");
  s->redo.push_back(std::move(s->moves.back()));
  s->moves.pop_back();
  s->rebuild();
  return s->state_json();
}

Json SessionManager::redo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->redo.empty()) throw Error(ErrorCode::invalid_argument, "nothing to redo");
  s->sim->advance(s->redo.back());
  s->moves.push_back(std::move(s->redo.back()));
  s->redo.pop_back();
  return s->state_json();
}

Json SessionManager::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->state_json();
}

std::string SessionManager::trace(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  Strategy strategy;
  strategy.spread_radius = s->r;
  strategy.budget = s->budget;
  strategy.schedule = s->moves;
  RunOptions opts;
  opts.stall_window = 1;
  auto t = run(*s->graph, s->x0, std::move(strategy), opts);
  t.family = s->family;
  return to_jsonl(t);
}

bool SessionManager::close(const std::string& id) {
  std::unique_lock lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionManager::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

}  // namespace firegraph
